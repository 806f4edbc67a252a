#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "innonet/analytics/spectral.hpp"
#include "innonet/core/combinatorics.hpp"
#include "innonet/core/errors.hpp"
#include "innonet/model/cost.hpp"

namespace innonet {

struct SupercriticalPayoff {
  double value = 0.0;
  double gross = 0.0;
  /// alpha*n < k-1: too few reachable ideas, gross set to 0.
  bool degenerate = false;
};

/// p^k alpha C(alpha n, k-1) (1 - delta iota - (1-delta) iota alpha)^(n-1) - c(p), iota = q^2.
inline SupercriticalPayoff supercritical_payoff(std::size_t n, std::size_t k, double delta,
                                                double p, double q, double alpha,
                                                const CostSpec& cost) {
  require(n >= 2 && k >= 2, "supercritical_payoff needs n >= 2, k >= 2");
  require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
  SupercriticalPayoff out;
  const double an = alpha * static_cast<double>(n);
  const double r = static_cast<double>(k - 1);
  if (an < r) {
    out.degenerate = true;
  } else {
    const double iota = q * q;
    const double escape = 1.0 - delta * iota - (1.0 - delta) * iota * alpha;
    out.gross = std::pow(p, static_cast<double>(k)) * alpha * binom_real(an, r) *
                std::pow(escape, static_cast<double>(n - 1));
  }
  out.value = out.gross - cost.value(p);
  return out;
}

/// Equilibrium interaction rate iota(q*, q*) under direct learning only.
inline double direct_eq_rate(std::size_t n, std::size_t k) {
  require(n >= 2 && k >= 2, "direct_eq_rate needs n >= 2, k >= 2");
  return std::pow(static_cast<double>(k - 1) / static_cast<double>(n - 1),
                  1.0 / static_cast<double>(k));
}

/// Large-n shape of average monopoly profits with patent share b.
inline double patent_profit_curve(double b, std::size_t k) {
  require(b >= 0.0 && b <= 1.0 && k >= 2, "patent curve needs b in [0,1], k >= 2");
  return std::pow(0.5 * (1.0 - b), static_cast<double>(k - 1)) * (b + 0.25 * (1.0 - b));
}

/// Argmax of the patent curve on a grid, refined by golden section.
inline double optimal_patent_share(std::size_t k, double grid = 1e-3) {
  const auto steps = static_cast<std::size_t>(std::llround(1.0 / grid));
  std::size_t best = 0;
  for (std::size_t s = 1; s <= steps; ++s)
    if (patent_profit_curve(static_cast<double>(s) / steps, k) >
        patent_profit_curve(static_cast<double>(best) / steps, k))
      best = s;
  double lo = std::max(0.0, (static_cast<double>(best) - 1.0) / steps);
  double hi = std::min(1.0, (static_cast<double>(best) + 1.0) / steps);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (patent_profit_curve(a, k) >= patent_profit_curve(b, k)) hi = b;
    else lo = a;
  }
  const double x = 0.5 * (lo + hi);
  // A flat start (k = 4) would otherwise drift off 0 by rounding.
  const double at0 = patent_profit_curve(0.0, k);
  return patent_profit_curve(x, k) <= at0 * (1.0 + 1e-12) ? 0.0 : x;
}

/// Predicted phase of the budget model, with boundary at delta/2.
inline Criticality budget_phase(double lambda_b, double delta) {
  require(lambda_b > 0.0 && delta > 0.0, "budget_phase needs lambda_b > 0, delta > 0");
  const double edge = 0.5 * delta;
  if (std::abs(lambda_b - edge) <= 1e-12 * edge) return Criticality::critical;
  return lambda_b < edge ? Criticality::subcritical : Criticality::supercritical;
}

}  // namespace innonet
