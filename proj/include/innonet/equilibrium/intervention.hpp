#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "innonet/core/errors.hpp"
#include "innonet/equilibrium/result.hpp"
#include "innonet/sim/monte_carlo.hpp"

namespace innonet {

struct InterventionOptions {
  std::size_t reps = 200;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  /// Half-width of the central difference in p.
  double h = 0.02;
  CountingOptions counting{10, 200'000, 4000, CountMethod::automatic};
};

struct InterventionPoint {
  double factor = 1.0;
  MeanSe payoff;
  /// U(p*, f q*) / U(p*, q*); NaN when the baseline payoff is <= 0.
  double ratio = std::numeric_limits<double>::quiet_NaN();
  /// Central difference of U in a uniform shift of every firm's p.
  double dp_derivative = 0.0;
  /// dp_derivative relative to the one at f = 1; NaN when that is <= 0.
  double dp_ratio = std::numeric_limits<double>::quiet_NaN();
};

struct InterventionScan {
  MeanSe baseline;
  double baseline_dp = 0.0;
  /// Baseline payoff <= 0, so ratios are undefined.
  bool guarded = false;
  std::vector<InterventionPoint> points;
};

/// Profiles with every non-public firm's openness scaled by `factor` and every
/// investing firm's p shifted by `shift`.
inline std::vector<FirmProfile> scaled_profiles(std::vector<FirmProfile> profiles, double factor,
                                                double shift = 0.0) {
  for (auto& f : profiles) {
    require(!f.budget_mode, "intervention scan does not apply to budget-mode firms");
    if (!f.is_public) {
      f.q = std::min(1.0, f.q * factor);
      if (f.directed()) {
        f.q_public = std::min(1.0, *f.q_public * factor);
        f.q_private = std::min(1.0, *f.q_private * factor);
      }
    }
    if (shift != 0.0) f.p = std::clamp(f.p + shift, 0.0, 1.0 - 1e-9);
  }
  return profiles;
}

/// Payoff ratios and p-sensitivities when openness is scaled away from an
/// equilibrium. All evaluations share one seed, so f = 1 gives ratio 1 exactly.
inline InterventionScan intervention_scan(const WorldConfig& world, const EquilibriumResult& eq,
                                          const std::vector<double>& factors,
                                          const InterventionOptions& opt) {
  require(eq.profiles.size() == world.n, "equilibrium profile does not match world.n");
  require(opt.h > 0.0, "intervention step h must be > 0");
  McOptions mc;
  mc.reps = opt.reps;
  mc.seed = opt.seed;
  mc.threads = opt.threads;
  mc.counting = opt.counting;
  auto mean_payoff = [&](double factor, double shift) {
    return expected_payoffs(world, scaled_profiles(eq.profiles, factor, shift), mc).firm_average;
  };
  auto derivative = [&](double factor) {
    return (mean_payoff(factor, opt.h).mean - mean_payoff(factor, -opt.h).mean) / (2.0 * opt.h);
  };
  InterventionScan out;
  out.baseline = mean_payoff(1.0, 0.0);
  out.baseline_dp = derivative(1.0);
  out.guarded = out.baseline.mean <= 0.0;
  for (double f : factors) {
    require(f >= 0.0, "intervention factors must be >= 0");
    InterventionPoint pt;
    pt.factor = f;
    pt.payoff = f == 1.0 ? out.baseline : mean_payoff(f, 0.0);
    if (!out.guarded) pt.ratio = pt.payoff.mean / out.baseline.mean;
    pt.dp_derivative = f == 1.0 ? out.baseline_dp : derivative(f);
    if (out.baseline_dp > 0.0) pt.dp_ratio = pt.dp_derivative / out.baseline_dp;
    out.points.push_back(pt);
  }
  return out;
}

}  // namespace innonet
