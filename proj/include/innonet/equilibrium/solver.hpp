#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "innonet/analytics/asymptotics.hpp"
#include "innonet/analytics/spectral.hpp"
#include "innonet/core/errors.hpp"
#include "innonet/core/rng.hpp"
#include "innonet/equilibrium/best_response.hpp"
#include "innonet/equilibrium/deviation.hpp"
#include "innonet/equilibrium/result.hpp"
#include "innonet/sim/monte_carlo.hpp"
#include "innonet/sim/tau.hpp"

namespace innonet {

/// Population structure for an equilibrium search. Payoff variants (f, rho,
/// phi, patents) come from the world config.
struct VariantSpec {
  enum class Kind { baseline, public_share, beta, patents, budget, directed, sigma };
  Kind kind = Kind::baseline;
  /// Share of public firms, patent holders or high-sigma firms.
  double share = 0.2;
  double beta_lo = 0.5;
  double beta_hi = 1.0;
  std::size_t beta_bins = 4;
  double budget_lambda = 0.5;
  unsigned sigma_high = 2;
};

inline std::string variant_label(const WorldConfig& world, const VariantSpec& v) {
  switch (v.kind) {
    case VariantSpec::Kind::public_share: return "public";
    case VariantSpec::Kind::beta: return "beta";
    case VariantSpec::Kind::patents: return "patents";
    case VariantSpec::Kind::budget: return "budget";
    case VariantSpec::Kind::directed: return "directed";
    case VariantSpec::Kind::sigma: return "sigma";
    case VariantSpec::Kind::baseline: break;
  }
  return std::string(to_string(world.payoff.variant));
}

/// Firms sharing one strategy. Only the representative deviates.
struct StrategyGroup {
  std::string label;
  std::vector<std::size_t> members;
  bool q_free = true;
  bool p_free = true;
  double p = 0.0;
  double q = 0.0;
  double q_public = 0.0;
  double q_private = 0.0;
  std::size_t representative() const { return members[members.size() / 2]; }
};

namespace detail {

inline std::vector<FirmProfile> apply_groups(std::vector<FirmProfile> base,
                                             const std::vector<StrategyGroup>& groups) {
  for (const auto& g : groups)
    for (auto i : g.members) {
      auto& f = base[i];
      f.q = f.directed() ? g.q_private : g.q;
      if (f.directed()) {
        f.q_public = g.q_public;
        f.q_private = g.q_private;
      }
      f.p = f.budget_mode ? std::max(0.0, 1.0 - f.budget_lambda * f.q * static_cast<double>(base.size()))
                          : g.p;
    }
  return base;
}

/// Running bracket on a fixed point of a decreasing best response.
struct Bracket {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool tight(double tol) const { return lo > 0.0 && std::isfinite(hi) && hi / lo - 1.0 <= tol; }

  /// Records the sign of br - q and returns the next iterate: the damped step,
  /// or the geometric midpoint when bisecting or when the step leaves the bracket.
  double next(double q, double br, double damped, bool bisect) {
    if (br > q) {
      if (q >= hi) hi = std::numeric_limits<double>::infinity();
      lo = std::max(lo, q);
    } else if (br < q) {
      if (q <= lo) lo = 0.0;
      hi = std::min(hi, q);
    } else {
      return q;
    }
    const bool bounded = lo > 0.0 && std::isfinite(hi);
    if (bounded && (bisect || damped <= lo || damped >= hi)) return std::sqrt(lo * hi);
    return damped;
  }
};

inline Rates group_rates(const StrategyGroup& g, bool directed) {
  return directed ? Rates{g.q_public, g.q_private} : Rates::uniform(g.q);
}

inline double critical_scale(const WorldConfig& world) {
  return world.delta > 0.0 ? 1.0 / std::sqrt(world.delta * static_cast<double>(world.n))
                           : std::sqrt(direct_eq_rate(world.n, world.k));
}

/// Best response of the group's representative along its free axes.
inline QResponse respond(const DeviationModel& model, const StrategyGroup& g, bool directed,
                         const SolverConfig& cfg) {
  const Rates now = group_rates(g, directed);
  if (!directed) return best_response_q(model, now, g.p, cfg, RateAxis::uniform);
  auto first = best_response_q(model, now, g.p, cfg, RateAxis::to_private);
  auto second = best_response_q(model, first.x, g.p, cfg, RateAxis::to_public);
  second.indifferent = first.indifferent && second.indifferent;
  second.p_independent = first.p_independent && second.p_independent;
  return second;
}

/// Best payoff over (q on the grid, p at its best response), for sigma = 1 deviators.
inline double best_attainable_payoff(const DeviationModel& model, const StrategyGroup& g,
                                     bool directed, const SolverConfig& cfg) {
  const Rates now = group_rates(g, directed);
  const auto grid = q_grid(model.world(), model.deviator_profile(), g.q, cfg);
  double best = -1e300;
  for (double v : grid) {
    const Rates x = directed ? Rates{v, v} : Rates::uniform(v);
    const auto s = model.samples(x);
    const double m = model.value(s, x, 0.5).marginal;
    const double p = model.deviator_profile().budget_mode ? 0.0 : best_response_p(m, model.world().cost);
    best = std::max(best, model.value(s, x, p).payoff.mean);
  }
  best = std::max(best, model.value(now, 0.0).payoff.mean);
  return best;
}

}  // namespace detail

/// Jacobi iteration over strategy groups. Each round first settles every
/// group's p at its first-order-condition root given the current rates, then
/// lets each free group's representative best-respond in q. q takes a damped
/// step, switching to bisection on a bracket of the fixed point after a burn-in.
inline EquilibriumResult solve_groups(const WorldConfig& world, const std::vector<FirmProfile>& base,
                                      std::vector<StrategyGroup> groups, const SolverConfig& cfg,
                                      const std::string& label) {
  world.validate();
  require(base.size() == world.n, "profile count must equal world.n");
  require(!groups.empty(), "solver needs at least one group");
  require(cfg.damping > 0.0 && cfg.damping <= 1.0, "damping must lie in (0,1]");
  require(cfg.reps >= 2, "solver needs reps >= 2");
  EquilibriumResult res;
  res.variant = label;
  res.n = world.n;
  res.k = world.k;
  res.delta = world.delta;
  char buf[320];
  const std::size_t ng = groups.size();
  std::vector<std::optional<DeviationModel>> models(ng);

  auto model_seed = [&](std::size_t gi, std::size_t t) {
    return cfg.common_random_numbers ? derive_seed(cfg.seed, 0x501eULL, gi)
                                     : derive_seed(cfg.seed, 0x501eULL, gi, t);
  };
  // Settles p for every group; leaves `models` built on the final profile.
  // Without `allow_collapse` a group whose root is the p = 0 corner keeps its p.
  auto settle_p = [&](std::size_t t, bool allow_collapse) {
    for (std::size_t s = 0;; ++s) {
      const auto profiles = detail::apply_groups(base, groups);
      for (std::size_t gi = 0; gi < ng; ++gi) {
        const auto& g = groups[gi];
        if (!g.q_free && !g.p_free) {
          models[gi].reset();
          continue;
        }
        models[gi].emplace(world, profiles, g.representative(), cfg.reps, model_seed(gi, t),
                           cfg.threads, cfg.counting);
      }
      if (s == cfg.max_p_iterations) return;
      double dp = 0.0;
      for (std::size_t gi = 0; gi < ng; ++gi) {
        auto& g = groups[gi];
        const auto& rep = profiles[g.representative()];
        if (!g.p_free || rep.budget_mode || !models[gi]) continue;
        const auto v = models[gi]->value(detail::group_rates(g, rep.directed()), g.p);
        double target = investment_update(v.marginal, g.p, world.k, world.cost);
        target = std::min(target, 1.0 - 1e-9);
        std::snprintf(buf, sizeof buf, "iter %zu.%zu group %s marginal %.6g p %.6g -> %.6g", t, s,
                      g.label.c_str(), v.marginal, g.p, target);
        res.trace.emplace_back(buf);
        if (target == 0.0 && !allow_collapse) continue;
        dp = std::max(dp, std::abs(target - g.p));
        g.p = target;
      }
      if (dp <= cfg.tolerance_p) return;
    }
  };

  std::vector<char> indifferent(ng, 0);
  // Brackets for [uniform or private, public] rates of each group.
  std::vector<std::array<detail::Bracket, 2>> brackets(ng);
  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    res.iterations = t;
    settle_p(t, false);
    const bool bisect = t > cfg.burn_in;
    auto next = groups;
    bool q_settled = true;
    for (std::size_t gi = 0; gi < ng; ++gi) {
      const auto& g = groups[gi];
      if (!g.q_free || !models[gi]) continue;
      const auto& model = *models[gi];
      const bool directed = model.deviator_profile().directed();
      auto& to = next[gi];
      const auto br = detail::respond(model, g, directed, cfg);
      indifferent[gi] = br.indifferent;
      auto move = [&](detail::Bracket& b, double a, double target) {
        if (br.indifferent) return a;
        const double v = b.next(a, target, (1.0 - cfg.damping) * a + cfg.damping * target, bisect);
        if (a > 0.0 && std::abs(v - a) / a > cfg.tolerance_q && !b.tight(2.0 * cfg.tolerance_q))
          q_settled = false;
        return v;
      };
      if (directed) {
        to.q_private = move(brackets[gi][0], g.q_private, br.x.to_private);
        to.q_public = move(brackets[gi][1], g.q_public, br.x.to_public);
        to.q = to.q_private;
      } else {
        to.q = move(brackets[gi][0], g.q, br.x.to_private);
      }
      if (model.deviator_profile().budget_mode)
        to.p = std::max(0.0, 1.0 - model.deviator_profile().budget_lambda * to.q *
                                       static_cast<double>(world.n));
      std::snprintf(buf, sizeof buf, "iter %zu group %s p %.6g q %.6g br %.6g/%.6g payoff %.6g%s%s",
                    t, g.label.c_str(), g.p, directed ? g.q_private : g.q, br.x.to_public,
                    br.x.to_private, br.value.payoff.mean, br.indifferent ? " indifferent" : "",
                    br.p_independent ? "" : " p-dependent");
      res.trace.emplace_back(buf);
    }
    groups = std::move(next);
    if (q_settled) {
      res.converged = true;
      break;
    }
  }
  settle_p(res.iterations + 1, true);

  res.profiles = detail::apply_groups(base, groups);
  res.lambda_hat = spectral_radius(res.profiles, world.delta);
  res.classification = classify(res.lambda_hat, cfg.band_lo, cfg.band_hi);
  bool any_positive = false;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const auto& g = groups[gi];
    const bool directed = res.profiles[g.representative()].directed();
    const DeviationModel model(world, res.profiles, g.representative(), cfg.reps,
                               derive_seed(cfg.seed, 0xce27ULL, gi), cfg.threads, cfg.counting);
    GroupOutcome o;
    o.label = g.label;
    o.size = g.members.size();
    o.p = res.profiles[g.representative()].p;
    o.q = g.q;
    o.q_public = directed ? g.q_public : g.q;
    o.q_private = directed ? g.q_private : g.q;
    o.directed = directed;
    o.payoff = model.value(detail::group_rates(g, directed), o.p).payoff;
    if (cfg.certificate && g.q_free && !indifferent[gi]) {
      const auto br = detail::respond(model, g, directed, cfg);
      const double now = directed ? g.q_private : g.q;
      if (now > 0.0) o.certificate_gap = std::abs(br.x.to_private - now) / now;
    }
    if (world.link_cost > 0.0 && model.deviator_profile().sigma == 1)
      any_positive = any_positive || detail::best_attainable_payoff(model, g, directed, cfg) > 0.0;
    else
      any_positive = true;
    res.groups.push_back(std::move(o));
  }
  const auto& main = res.groups.front();
  res.p_star = main.p;
  res.q_star = main.directed ? main.q_private : main.q;
  res.payoff = main.payoff;
  res.investment = std::any_of(res.groups.begin(), res.groups.end(),
                               [](const GroupOutcome& o) { return o.p > 1e-9; });
  if (res.investment && cfg.tau_reps > 0) {
    McOptions opt;
    opt.reps = cfg.tau_reps;
    opt.seed = derive_seed(cfg.seed, stream::kTau);
    opt.threads = cfg.threads;
    opt.counting = cfg.counting;
    const auto& members = groups.front().members;
    std::vector<std::size_t> firms(members.begin(),
                                   members.begin() + std::min(members.size(), cfg.tau_firms));
    const auto tau = pooled_tau(world, res.profiles, opt, cfg.tau_samples, firms);
    res.tau_mean = tau.mean;
    res.tau_se = tau.se;
  }
  if (!res.investment || !any_positive) {
    res.investment = false;
    res.status = "no investment equilibrium";
  } else if (!res.converged) {
    res.status = "not converged";
  }
  for (const auto& o : res.groups)
    if (o.certificate_gap > cfg.certificate_tolerance) {
      std::snprintf(buf, sizeof buf, "certificate gap %.3g for group %s exceeds %.3g",
                    o.certificate_gap, o.label.c_str(), cfg.certificate_tolerance);
      res.trace.emplace_back(buf);
    }
  return res;
}

/// Symmetric equilibrium of the baseline population (payoff variant from world).
/// Seeding with p_init = 0 reports the trivial non-investment outcome.
inline EquilibriumResult symmetric_equilibrium(const WorldConfig& world, const SolverConfig& cfg) {
  StrategyGroup g;
  g.label = "all";
  g.members.resize(world.n);
  std::iota(g.members.begin(), g.members.end(), std::size_t{0});
  g.p = cfg.p_init;
  g.q = detail::critical_scale(world);
  auto res = solve_groups(world, symmetric_profiles(world.n, cfg.p_init, g.q), {g}, cfg,
                          std::string(to_string(world.payoff.variant)));
  if (cfg.p_init == 0.0) res.status = "trivial: no investment";
  return res;
}

/// Equilibrium of a structured population.
inline EquilibriumResult variant_equilibrium(WorldConfig world, const VariantSpec& v,
                                             const SolverConfig& cfg) {
  using Kind = VariantSpec::Kind;
  const std::size_t n = world.n;
  const double scale = detail::critical_scale(world);
  std::vector<FirmProfile> base(n);
  std::vector<StrategyGroup> groups;
  auto split = [&](const std::string& a, const std::string& b) {
    const auto m = static_cast<std::size_t>(std::llround(v.share * static_cast<double>(n)));
    require(m >= 1 && m < n, "variant share leaves an empty group");
    StrategyGroup ga, gb;
    ga.label = a;
    gb.label = b;
    for (std::size_t i = 0; i < n; ++i) (i < n - m ? ga : gb).members.push_back(i);
    for (auto* g : {&ga, &gb}) {
      g->p = cfg.p_init;
      g->q = scale;
      g->q_public = scale;
      g->q_private = scale;
    }
    groups = {ga, gb};
  };

  switch (v.kind) {
    case Kind::baseline: {
      auto r = symmetric_equilibrium(world, cfg);
      return r;
    }
    case Kind::public_share:
      split("private", "public");
      for (auto i : groups[1].members) base[i].is_public = true;
      groups[1].q = 1.0;
      groups[1].q_free = false;
      break;
    case Kind::directed:
      split("private", "public");
      for (auto i : groups[1].members) base[i].is_public = true;
      for (auto i : groups[0].members) {
        base[i].q_public = scale;
        base[i].q_private = scale;
      }
      groups[1].q = 1.0;
      groups[1].q_free = false;
      break;
    case Kind::patents:
      world.payoff.variant = PayoffVariant::patents;
      split("unpatented", "patented");
      for (auto i : groups[1].members) base[i].patented = true;
      if (world.delta > 0.0) {
        groups[1].q = 1.0;
        groups[1].q_free = false;
      }
      break;
    case Kind::sigma:
      split("sigma1", "sigma" + std::to_string(v.sigma_high));
      for (auto i : groups[1].members) base[i].sigma = v.sigma_high;
      break;
    case Kind::budget: {
      require(v.budget_lambda > 0.0, "budget lambda must be > 0");
      StrategyGroup g;
      g.label = "budget";
      g.members.resize(n);
      std::iota(g.members.begin(), g.members.end(), std::size_t{0});
      g.p_free = false;
      g.q = 0.5 / (v.budget_lambda * static_cast<double>(n));
      for (auto& f : base) f = budget_profile(g.q, v.budget_lambda, n);
      g.p = base[0].p;
      groups = {g};
      break;
    }
    case Kind::beta: {
      require(v.beta_lo > 0.0 && v.beta_hi <= 1.0 && v.beta_lo < v.beta_hi,
              "beta range must lie in (0,1]");
      require(v.beta_bins >= 1 && v.beta_bins <= n, "beta bins must lie in [1, n]");
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), std::size_t{0});
      for (std::size_t i = 0; i < n; ++i)
        base[i].beta = v.beta_lo + (v.beta_hi - v.beta_lo) *
                                       hash_unit(cfg.seed, stream::kPopulation, i);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return base[a].beta < base[b].beta; });
      for (std::size_t b = 0; b < v.beta_bins; ++b) {
        StrategyGroup g;
        g.label = "beta" + std::to_string(b);
        for (std::size_t r = b * n / v.beta_bins; r < (b + 1) * n / v.beta_bins; ++r)
          g.members.push_back(order[r]);
        g.p = cfg.p_init;
        g.q = scale;
        groups.push_back(std::move(g));
      }
      break;
    }
  }
  for (auto& g : groups)
    for (auto i : g.members) base[i].p = g.p;
  auto res = solve_groups(world, base, groups, cfg, variant_label(world, v));
  if (cfg.p_init == 0.0) res.status = "trivial: no investment";
  return res;
}

}  // namespace innonet
