#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "innonet/analytics/asymptotics.hpp"
#include "innonet/analytics/investment.hpp"
#include "innonet/core/errors.hpp"
#include "innonet/equilibrium/deviation.hpp"
#include "innonet/equilibrium/result.hpp"

namespace innonet {

/// Which of the deviator's rates a search moves.
enum class RateAxis { uniform, to_public, to_private };

struct QResponse {
  Rates x;
  DeviationValue value;
  /// Objective constant on the grid; x is the current rate.
  bool indifferent = false;
  /// Grid argmax unchanged when p is halved.
  bool p_independent = true;
  std::vector<double> grid;
  std::vector<double> grid_payoff;
};

inline double axis_rate(const Rates& x, RateAxis axis) {
  return axis == RateAxis::to_public ? x.to_public : x.to_private;
}

inline Rates with_axis(Rates x, RateAxis axis, double v) {
  if (axis == RateAxis::uniform) return Rates::uniform(v);
  (axis == RateAxis::to_public ? x.to_public : x.to_private) = v;
  return x;
}

/// Log-spaced candidate rates around the scale of the critical rate.
inline std::vector<double> q_grid(const WorldConfig& world, const FirmProfile& dev, double q_now,
                                  const SolverConfig& cfg) {
  require(cfg.grid_points >= 3, "solver grid needs at least 3 points");
  const double n = static_cast<double>(world.n);
  double lo, hi;
  if (dev.budget_mode) {
    // Budget line: q in (0, 1/(lambda n)].
    hi = std::min(1.0, 1.0 / (dev.budget_lambda * n)) * (1.0 - 1e-9);
    lo = hi / 50.0;
  } else {
    const double scale =
        world.delta > 0.0 ? 1.0 / std::sqrt(world.delta * n) : std::sqrt(direct_eq_rate(world.n, world.k));
    lo = scale / cfg.grid_span;
    hi = scale * cfg.grid_span;
    if (q_now > 0.0) {
      lo = std::min(lo, q_now / cfg.width_factor);
      hi = std::max(hi, q_now * cfg.width_factor);
    }
    hi = std::min(hi, 1.0);
    lo = std::min(lo, hi / 4.0);
  }
  std::vector<double> g(cfg.grid_points);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(g.size() - 1));
  g.back() = hi;
  return g;
}

namespace detail {

/// Argmax over [x.front(), x.back()] of the least-squares polynomial of the
/// given degree in log x; nullopt when the normal equations are singular.
inline std::optional<double> fitted_peak(const std::vector<double>& x,
                                         const std::vector<double>& u, std::size_t degree) {
  const std::size_t m = degree + 1;
  if (x.size() < m) return std::nullopt;
  const double lo = std::log(x.front()), hi = std::log(x.back());
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  if (!(half > 0.0)) return std::nullopt;
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  std::vector<double> pw(2 * m);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = (std::log(x[i]) - mid) / half;
    pw[0] = 1.0;
    for (std::size_t e = 1; e < pw.size(); ++e) pw[e] = pw[e - 1] * t;
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) a[r][c] += pw[r + c];
      a[r][m] += pw[r] * u[i];
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) < 1e-12) return std::nullopt;
    std::swap(a[c], a[piv]);
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= m; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> z(m);
  for (std::size_t r = m; r-- > 0;) {
    double v = a[r][m];
    for (std::size_t j = r + 1; j < m; ++j) v -= a[r][j] * z[j];
    z[r] = v / a[r][r];
  }
  constexpr int kSteps = 2000;
  double best_t = -1.0, best_v = -std::numeric_limits<double>::infinity();
  for (int s = 0; s <= kSteps; ++s) {
    const double t = -1.0 + 2.0 * s / kSteps;
    double v = 0.0;
    for (std::size_t e = m; e-- > 0;) v = v * t + z[e];
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  return std::exp(mid + half * best_t);
}

}  // namespace detail

/// Best response along one rate axis: grid evaluation with common random numbers,
/// then a fitted peak (or golden-section refinement of the grid argmax).
inline QResponse best_response_q(const DeviationModel& model, const Rates& current, double p,
                                 const SolverConfig& cfg, RateAxis axis = RateAxis::uniform) {
  QResponse out;
  const double q_now = axis_rate(current, axis);
  out.grid = q_grid(model.world(), model.deviator_profile(), q_now, cfg);
  const std::size_t g = out.grid.size();
  out.grid_payoff.resize(g);
  std::vector<double> at_half(g);
  for (std::size_t i = 0; i < g; ++i) {
    const Rates x = with_axis(current, axis, out.grid[i]);
    const auto s = model.samples(x);
    out.grid_payoff[i] = model.value(s, x, p).payoff.mean;
    at_half[i] = model.value(s, x, 0.5 * p).payoff.mean;
  }
  const auto best = static_cast<std::size_t>(
      std::max_element(out.grid_payoff.begin(), out.grid_payoff.end()) - out.grid_payoff.begin());
  const auto best_half = static_cast<std::size_t>(
      std::max_element(at_half.begin(), at_half.end()) - at_half.begin());
  out.p_independent = best == best_half;
  const auto [mn, mx] = std::minmax_element(out.grid_payoff.begin(), out.grid_payoff.end());
  if (*mx - *mn <= 1e-12 * std::max(1.0, std::abs(*mx))) {
    out.indifferent = true;
    out.x = current;
    out.value = model.value(current, p);
    return out;
  }
  if (cfg.fit_degree > 0) {
    if (const auto peak = detail::fitted_peak(out.grid, out.grid_payoff, cfg.fit_degree)) {
      out.x = with_axis(current, axis, *peak);
      out.value = model.value(out.x, p);
      return out;
    }
  }
  double lo = std::log(out.grid[best > 0 ? best - 1 : 0]);
  double hi = std::log(out.grid[std::min(best + 1, g - 1)]);
  double best_x = out.grid[best], best_u = out.grid_payoff[best];
  auto eval = [&](double lx) {
    const double v = std::exp(lx);
    const double u = model.value(with_axis(current, axis, v), p).payoff.mean;
    if (u > best_u) {
      best_u = u;
      best_x = v;
    }
    return u;
  };
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - ratio * (hi - lo), b = lo + ratio * (hi - lo);
  double fa = eval(a), fb = eval(b);
  for (std::size_t it = 0; it < cfg.golden_iterations; ++it) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = eval(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = eval(b);
    }
  }
  out.x = with_axis(current, axis, best_x);
  out.value = model.value(out.x, p);
  return out;
}

/// Best-response investment for marginal gross value M = dE[gross]/dp: largest
/// root of c'(p) = M, or 0 at the corner.
inline double best_response_p(double marginal, const CostSpec& cost) {
  const auto r = solve_investment_foc(1, marginal, cost);
  return r.corner ? 0.0 : r.p;
}

/// Investment update toward the symmetric root c'(p) = p^(k-1) E with
/// E = M / p_now^(k-1); its fixed points are best responses. Falls back to the
/// plain best response when p_now is near 0.
inline double investment_update(double marginal, double p_now, std::size_t k,
                                const CostSpec& cost) {
  if (marginal <= 0.0) return 0.0;
  if (p_now < 1e-3) return best_response_p(marginal, cost);
  const double e = marginal / std::pow(p_now, static_cast<double>(k - 1));
  const auto r = solve_investment_foc(k, e, cost);
  return r.corner ? 0.0 : r.p;
}

}  // namespace innonet
