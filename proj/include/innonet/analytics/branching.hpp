#pragma once

#include <cmath>
#include <cstddef>

#include "innonet/core/errors.hpp"

namespace innonet {

/// Positive root of alpha = 1 - exp(-c alpha); 0 when c <= 1.
inline double giant_share(double c, double tol = 1e-10) {
  require(c >= 0.0, "giant_share needs c >= 0");
  if (c <= 1.0) return 0.0;
  // g(a) = 1 - exp(-c a) - a is positive just above 0 and negative at 1.
  auto g = [c](double a) { return -std::expm1(-c * a) - a; };
  double lo = 0.0, hi = 1.0;
  // Move lo off the trivial root: g > 0 on (0, alpha).
  double a = 0.5;
  while (g(a) <= 0.0 && a > 1e-300) a *= 0.5;
  lo = a;
  for (int it = 0; it < 200 && hi - lo > tol * 1e-3; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct GiantPrediction {
  double c = 0.0;
  double alpha = 0.0;
  /// p * alpha * n: expected ideas learned by a firm attached to the giant set.
  double predicted_learned = 0.0;
};

inline GiantPrediction giant_prediction(std::size_t n, double p, double q, double delta) {
  GiantPrediction g;
  g.c = q * q * delta * static_cast<double>(n);
  g.alpha = giant_share(g.c);
  g.predicted_learned = p * g.alpha * static_cast<double>(n);
  return g;
}

/// Borel total-progeny pmf of a Poisson(C') branching process:
/// exp(-C'y) (C'y)^(y-1) / y!.
inline double borel_total_progeny_pmf(double cprime, std::size_t y) {
  require(cprime > 0.0, "borel pmf needs C' > 0");
  require(y >= 1, "borel pmf needs y >= 1");
  const double yd = static_cast<double>(y);
  return std::exp(-cprime * yd + (yd - 1.0) * std::log(cprime * yd) - std::lgamma(yd + 1.0));
}

/// Partial sum of the pmf over y = 1..y_max.
inline double borel_mass(double cprime, std::size_t y_max) {
  double s = 0.0;
  // Small terms last.
  for (std::size_t y = y_max; y >= 1; --y) s += borel_total_progeny_pmf(cprime, y);
  return s;
}

}  // namespace innonet
