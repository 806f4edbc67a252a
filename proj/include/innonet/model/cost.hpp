#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "innonet/core/errors.hpp"

namespace innonet {

enum class CostFamily {
  inverse,  ///< c0 * (1/(1-p) - 1 - p)
  log,      ///< c0 * (-log(1-p) - p)
};

struct CostSpec {
  CostFamily family = CostFamily::inverse;
  double c0 = 1.0;

  double value(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    switch (family) {
      case CostFamily::inverse: return c0 * (1.0 / (1.0 - p) - 1.0 - p);
      case CostFamily::log: return c0 * (-std::log1p(-p) - p);
    }
    return 0.0;
  }

  double derivative(double p) const {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    switch (family) {
      case CostFamily::inverse: {
        const double s = 1.0 - p;
        return c0 * (1.0 / (s * s) - 1.0);
      }
      case CostFamily::log: return c0 * p / (1.0 - p);
    }
    return 0.0;
  }
};

inline std::string_view to_string(CostFamily f) {
  return f == CostFamily::inverse ? "inverse" : "log";
}

inline CostFamily parse_cost_family(std::string_view s) {
  if (s == "inverse") return CostFamily::inverse;
  if (s == "log") return CostFamily::log;
  throw InvalidInput("unknown cost family '" + std::string(s) + "'");
}

inline const std::vector<CostFamily>& registered_cost_families() {
  static const std::vector<CostFamily> all{CostFamily::inverse, CostFamily::log};
  return all;
}

/// Grid check of c(0)=0, strictly increasing, convex, unbounded near 1, c'(0)>=0.
inline bool cost_invariants_hold(const CostSpec& c, int grid = 2000) {
  if (!(c.c0 > 0.0)) return false;
  if (c.value(0.0) != 0.0 || c.derivative(0.0) < 0.0) return false;
  double prev = c.value(0.0);
  double prev_slope = -1.0;
  const double h = 1.0 / grid;
  for (int i = 1; i < grid; ++i) {
    const double p = i * h;
    const double v = c.value(p);
    if (!(v > prev)) return false;
    const double slope = (v - prev) / h;
    if (slope < prev_slope - 1e-9 * std::abs(slope)) return false;
    prev_slope = slope;
    prev = v;
  }
  // Divergence at 1 shows up as unbounded growth on a geometric approach.
  return c.value(1.0 - 1e-12) > 2.0 * c.value(1.0 - 1e-3) &&
         std::isinf(c.value(1.0));
}

}  // namespace innonet
