#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "innonet/core/errors.hpp"
#include "innonet/model/types.hpp"

namespace innonet {

enum class Criticality { subcritical, critical, supercritical };

inline std::string_view to_string(Criticality c) {
  switch (c) {
    case Criticality::subcritical: return "subcritical";
    case Criticality::critical: return "critical";
    case Criticality::supercritical: return "supercritical";
  }
  return "critical";
}

/// Band classification of a criticality index.
inline Criticality classify(double lambda, double band_lo = 0.9, double band_hi = 1.1) {
  if (lambda < band_lo) return Criticality::subcritical;
  if (lambda > band_hi) return Criticality::supercritical;
  return Criticality::critical;
}

struct SpectralResult {
  double lambda = 0.0;
  /// Collatz-Wielandt bounds at exit.
  double lower = 0.0;
  double upper = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct CriticalityReport {
  double criticality_index = 0.0;
  Criticality classification = Criticality::subcritical;
  std::vector<double> row_sums;
  SpectralResult solve;
};

/// Indirect-link probability matrix M_ij = delta * P(arc i <- j), zero diagonal,
/// stored in factored form. P(arc i <- j) = L_i[type(j)] * S_j[type(i)] where a
/// type is (public, budget).
class IndirectLinkMatrix {
 public:
  static constexpr std::size_t kTypes = 4;

  IndirectLinkMatrix(const std::vector<FirmProfile>& profiles, double delta) {
    n_ = profiles.size();
    type_.resize(n_);
    learn_.resize(n_);
    send_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& f = profiles[i];
      type_[i] = static_cast<unsigned>(f.is_public) | (static_cast<unsigned>(f.budget_mode) << 1);
      for (unsigned t = 0; t < kTypes; ++t) {
        const bool partner_public = t & 1u;
        const bool partner_budget = t & 2u;
        learn_[i][t] = delta * (f.budget_mode ? f.beta * f.q : f.beta * f.rate_toward(partner_public));
        send_[i][t] = partner_budget ? 1.0 : f.rate_toward(partner_public);
      }
    }
  }

  std::size_t size() const noexcept { return n_; }

  double entry(std::size_t i, std::size_t j) const {
    return i == j ? 0.0 : learn_[i][type_[j]] * send_[j][type_[i]];
  }

  /// y = M x in O(n * types).
  void apply(const std::vector<double>& x, std::vector<double>& y) const {
    std::array<std::array<double, kTypes>, kTypes> agg{};  // agg[type of j][type of i]
    for (std::size_t j = 0; j < n_; ++j)
      for (unsigned t = 0; t < kTypes; ++t) agg[type_[j]][t] += send_[j][t] * x[j];
    y.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      const unsigned ti = type_[i];
      double s = 0.0;
      for (unsigned c = 0; c < kTypes; ++c) s += learn_[i][c] * agg[c][ti];
      y[i] = s - learn_[i][ti] * send_[i][ti] * x[i];
    }
  }

  std::vector<double> row_sums() const {
    std::vector<double> ones(n_, 1.0), out;
    apply(ones, out);
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<unsigned> type_;
  std::vector<std::array<double, kTypes>> learn_, send_;
};

/// Perron root of a nonnegative operator by shifted power iteration with
/// Collatz-Wielandt stopping. `apply(x, y)` must compute y = M x.
template <typename Apply>
SpectralResult perron_root(std::size_t n, Apply&& apply, double tol = 1e-10,
                           std::size_t max_iter = 100000) {
  SpectralResult out;
  if (n == 0) {
    out.converged = true;
    return out;
  }
  std::vector<double> x(n, 1.0), y;
  apply(x, y);
  double shift = 0.0;
  for (double v : y) shift = std::max(shift, v);
  if (shift == 0.0) {
    out.converged = true;
    return out;
  }
  // The shift removes the sign oscillation of zero-diagonal matrices.
  shift *= 0.5;
  double last_upper = std::numeric_limits<double>::infinity();
  std::size_t stagnant = 0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    apply(x, y);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = y[i] + shift * x[i];
      const double ratio = a / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      y[i] = a;
      norm = std::max(norm, a);
    }
    out.lower = std::max(0.0, lo - shift);
    out.upper = hi - shift;
    out.iterations = it;
    if (out.upper - out.lower <= tol * std::max(out.upper, 1e-300)) {
      out.lambda = 0.5 * (out.lower + out.upper);
      out.converged = true;
      return out;
    }
    // Reducible matrices can keep the lower bound pinned; accept a frozen upper bound.
    if (std::abs(out.upper - last_upper) <= 1e-15 * out.upper) {
      if (++stagnant >= 200) {
        out.lambda = out.upper;
        out.converged = true;
        return out;
      }
    } else {
      stagnant = 0;
    }
    last_upper = out.upper;
    for (std::size_t i = 0; i < n; ++i) x[i] = std::max(y[i] / norm, 1e-300);
  }
  out.lambda = out.upper;
  return out;
}

/// Spectral radius of the indirect-link probability matrix.
inline SpectralResult spectral_radius_solve(const std::vector<FirmProfile>& profiles,
                                            double delta, double tol = 1e-10) {
  require(profiles.size() >= 2, "spectral radius needs n >= 2");
  const IndirectLinkMatrix m(profiles, delta);
  return perron_root(
      m.size(), [&](const std::vector<double>& x, std::vector<double>& y) { m.apply(x, y); },
      tol);
}

/// Spectral radius; throws ConvergenceError if the iteration cap is hit.
inline double spectral_radius(const std::vector<FirmProfile>& profiles, double delta) {
  const auto r = spectral_radius_solve(profiles, delta);
  if (!r.converged)
    throw ConvergenceError("spectral radius did not converge (bounds " +
                           std::to_string(r.lower) + ", " + std::to_string(r.upper) + ")");
  return r.lambda;
}

inline CriticalityReport criticality(const std::vector<FirmProfile>& profiles, double delta,
                                     double band_lo = 0.9, double band_hi = 1.1) {
  CriticalityReport rep;
  rep.solve = spectral_radius_solve(profiles, delta);
  if (!rep.solve.converged) throw ConvergenceError("spectral radius did not converge");
  rep.criticality_index = rep.solve.lambda;
  rep.classification = classify(rep.criticality_index, band_lo, band_hi);
  rep.row_sums = IndirectLinkMatrix(profiles, delta).row_sums();
  return rep;
}

}  // namespace innonet
