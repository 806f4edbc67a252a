#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "innonet/core/errors.hpp"
#include "innonet/model/cost.hpp"

namespace innonet {

enum class PayoffVariant { baseline, rho, phi, competition, patents, public_innovators };

inline std::string_view to_string(PayoffVariant v) {
  switch (v) {
    case PayoffVariant::baseline: return "baseline";
    case PayoffVariant::rho: return "rho";
    case PayoffVariant::phi: return "phi";
    case PayoffVariant::competition: return "competition";
    case PayoffVariant::patents: return "patents";
    case PayoffVariant::public_innovators: return "public";
  }
  return "baseline";
}

inline PayoffVariant parse_payoff_variant(std::string_view s) {
  for (auto v : {PayoffVariant::baseline, PayoffVariant::rho, PayoffVariant::phi,
                 PayoffVariant::competition, PayoffVariant::patents,
                 PayoffVariant::public_innovators})
    if (to_string(v) == s) return v;
  throw InvalidInput("unknown payoff variant '" + std::string(s) + "'");
}

/// Payoff rule for private firms. Public firms and patent holders follow the
/// same rule under every variant (see payoff_profile).
struct PayoffSpec {
  PayoffVariant variant = PayoffVariant::baseline;
  double rho = 1.0;
  /// phi(0), phi(1), ... ; extended linearly past the end.
  std::vector<double> phi;
  /// f(1), f(2), ... ; f(0) = 1 implicitly, last value repeats for larger m.
  std::vector<double> competition;

  /// f(m) for m >= 0.
  double f(std::size_t m) const {
    if (m == 0) return 1.0;
    if (competition.empty()) return 0.0;
    return competition[std::min(m, competition.size()) - 1];
  }

  double phi_at(double x) const {
    if (phi.empty()) return 0.0;
    if (phi.size() == 1) return phi[0];
    const std::size_t last = phi.size() - 1;
    if (x <= static_cast<double>(last)) {
      const auto lo = static_cast<std::size_t>(std::floor(x));
      const double frac = x - static_cast<double>(lo);
      if (lo >= last) return phi[last];
      return phi[lo] + frac * (phi[lo + 1] - phi[lo]);
    }
    return phi[last] + (x - static_cast<double>(last)) * (phi[last] - phi[last - 1]);
  }

  /// Number of explicit multiplicity buckets needed to price contested sets.
  std::size_t multiplicity_buckets() const {
    return std::max<std::size_t>(competition.size(), 2) + 1;
  }
  /// Buckets that affect gross payoff: only competition looks past m = 0.
  std::size_t priced_buckets() const {
    return variant == PayoffVariant::competition ? multiplicity_buckets() : 2;
  }

  void validate() const {
    require(rho > 0.0, "payoff.rho must be > 0");
    for (std::size_t i = 1; i < phi.size(); ++i)
      require(phi[i] > phi[i - 1], "payoff.phi must be strictly increasing");
    double prev = 1.0;
    for (double v : competition) {
      require(v <= prev, "payoff.competition must be weakly decreasing from f(0)=1");
      prev = v;
    }
  }
};

struct WorldConfig {
  std::size_t n = 2;
  std::size_t k = 2;
  double delta = 1.0;
  CostSpec cost;
  PayoffSpec payoff;
  double link_cost = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    require(n >= 2, "world.n must be >= 2");
    require(k >= 2, "world.k must be >= 2");
    require(delta >= 0.0 && delta <= 1.0, "world.delta must lie in [0,1]");
    require(link_cost >= 0.0, "world.link_cost must be >= 0");
    require(cost.c0 > 0.0, "world.cost.c0 must be > 0");
    payoff.validate();
  }
};

inline constexpr std::uint64_t kAutoStream = std::numeric_limits<std::uint64_t>::max();

struct FirmProfile {
  double p = 0.0;
  double q = 0.0;
  double beta = 1.0;
  bool patented = false;
  bool is_public = false;
  unsigned sigma = 1;
  /// Directed rates toward public and private partners; both or neither.
  std::optional<double> q_public;
  std::optional<double> q_private;
  bool budget_mode = false;
  double budget_lambda = 0.0;
  /// Identity used for keyed random streams; kAutoStream means "firm index".
  std::uint64_t stream = kAutoStream;

  bool directed() const noexcept { return q_public.has_value(); }

  /// This firm's openness toward a partner of the given kind.
  double rate_toward(bool partner_public) const noexcept {
    if (!directed()) return q;
    return partner_public ? *q_public : *q_private;
  }

  void validate(std::size_t n) const {
    require(p >= 0.0 && p < 1.0, "profile.p must lie in [0,1)");
    require(q >= 0.0 && q <= 1.0, "profile.q must lie in [0,1]");
    require(beta > 0.0 && beta <= 1.0, "profile.beta must lie in (0,1]");
    require(sigma >= 1, "profile.sigma must be >= 1");
    require(q_public.has_value() == q_private.has_value(),
            "directed rates need both q_public and q_private");
    if (directed())
      require(*q_public >= 0.0 && *q_public <= 1.0 && *q_private >= 0.0 &&
                  *q_private <= 1.0,
              "directed rates must lie in [0,1]");
    if (budget_mode) {
      require(budget_lambda > 0.0, "budget lambda must be > 0");
      require(std::abs(p + budget_lambda * q * static_cast<double>(n) - 1.0) < 1e-12,
              "budget identity p + lambda q n = 1 violated");
    }
  }
};

/// Profile on the budget line p = 1 - lambda q n.
inline FirmProfile budget_profile(double q, double lambda, std::size_t n) {
  FirmProfile f;
  f.budget_mode = true;
  f.budget_lambda = lambda;
  f.q = q;
  f.p = 1.0 - lambda * q * static_cast<double>(n);
  return f;
}

inline std::uint64_t stream_of(const std::vector<FirmProfile>& profiles, std::size_t i) {
  const auto s = profiles[i].stream;
  return s == kAutoStream ? static_cast<std::uint64_t>(i) : s;
}

/// Probability that `learner` learns directly from `source`.
inline double arc_probability(const FirmProfile& learner, const FirmProfile& source) {
  if (learner.budget_mode) return learner.beta * learner.q;
  return learner.beta * learner.rate_toward(source.is_public) *
         source.rate_toward(learner.is_public);
}

inline void validate_profiles(const WorldConfig& world,
                              const std::vector<FirmProfile>& profiles) {
  require(profiles.size() == world.n, "profile count must equal world.n");
  for (const auto& f : profiles) f.validate(world.n);
}

inline std::vector<FirmProfile> symmetric_profiles(std::size_t n, double p, double q) {
  FirmProfile f;
  f.p = p;
  f.q = q;
  return std::vector<FirmProfile>(n, f);
}

}  // namespace innonet
