#pragma once

#include <cmath>
#include <cstddef>

#include "innonet/core/errors.hpp"
#include "innonet/model/cost.hpp"

namespace innonet {

/// c'(p) - p^(k-1) E.
inline double investment_foc_residual(double p, std::size_t k, double e_ppt,
                                      const CostSpec& cost) {
  require(p >= 0.0 && p < 1.0, "FOC needs p in [0,1)");
  require(e_ppt >= 0.0, "FOC needs E >= 0");
  return cost.derivative(p) - std::pow(p, static_cast<double>(k - 1)) * e_ppt;
}

struct FocRoot {
  double p = 0.0;
  double residual = 0.0;
  /// No sign change on (0,1): the optimum is the p = 0 corner.
  bool corner = false;
};

/// Largest root of the FOC on (0,1): scan down from the top until the residual
/// turns non-positive, then bisect.
inline FocRoot solve_investment_foc(std::size_t k, double e_ppt, const CostSpec& cost,
                                    std::size_t grid = 4000) {
  require(k >= 1, "FOC needs k >= 1");
  FocRoot out;
  if (e_ppt <= 0.0) {
    out.corner = true;
    return out;
  }
  auto r = [&](double p) { return investment_foc_residual(p, k, e_ppt, cost); };
  double hi = 1.0 - 1e-12;
  if (r(hi) <= 0.0) {
    out.p = hi;
    out.residual = r(hi);
    return out;
  }
  double lo = -1.0;
  for (std::size_t s = grid - 1; s >= 1; --s) {
    const double p = static_cast<double>(s) / static_cast<double>(grid);
    if (r(p) <= 0.0) {
      lo = p;
      break;
    }
    hi = p;
  }
  if (lo < 0.0) {
    out.corner = true;
    return out;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (r(mid) <= 0.0 ? lo : hi) = mid;
  }
  const double rl = r(lo), rh = r(hi);
  out.p = std::abs(rl) <= std::abs(rh) ? lo : hi;
  out.residual = r(out.p);
  return out;
}

}  // namespace innonet
