#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace innonet {

using i128 = __int128;
using u128 = unsigned __int128;

/// Exact C(n, r). Saturates at the u128 maximum instead of wrapping.
constexpr u128 binom_exact(std::uint64_t n, std::uint64_t r) noexcept {
  if (r > n) return 0;
  if (r > n - r) r = n - r;
  u128 acc = 1;
  constexpr u128 kMax = ~u128{0};
  for (std::uint64_t i = 0; i < r; ++i) {
    const u128 mul = n - i;
    if (acc > kMax / mul) return kMax;
    acc = acc * mul / (i + 1);
  }
  return acc;
}

inline double to_double(i128 v) noexcept { return static_cast<double>(v); }
inline double to_double(u128 v) noexcept { return static_cast<double>(v); }

/// log C(x, r) for real x >= r, via lgamma.
inline double log_binom(double x, double r) {
  return std::lgamma(x + 1.0) - std::lgamma(r + 1.0) - std::lgamma(x - r + 1.0);
}

/// C(x, r) generalized to real x through the Gamma function. Zero when x < r.
inline double binom_real(double x, double r) {
  if (x < r) return 0.0;
  return std::exp(log_binom(x, r));
}

/// C(n, r) as a double, exact while the true value fits in 53 bits.
inline double binom_double(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0.0;
  const u128 exact = binom_exact(n, r);
  if (exact != ~u128{0}) return to_double(exact);
  return binom_real(static_cast<double>(n), static_cast<double>(r));
}

}  // namespace innonet
