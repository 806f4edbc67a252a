#pragma once

// Naive reference implementations. Deliberately share no code with sim/ so
// they can serve as independent oracles in tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "innonet/core/errors.hpp"
#include "innonet/core/rng.hpp"
#include "innonet/model/types.hpp"
#include "innonet/sim/network.hpp"

namespace innonet::oracle {

/// knows[i][x]: firm i knows idea x (own discovered ideas included).
/// Plain fixed-point iteration of the learning rules.
inline std::vector<std::vector<char>> naive_knowledge(const RealizedNetwork& net) {
  const std::size_t ideas = net.idea_count();
  std::vector<std::vector<char>> know(net.n, std::vector<char>(ideas, 0));
  auto own = [&](std::size_t f, std::vector<char>& into) {
    bool changed = false;
    for (std::size_t x = 0; x < ideas; ++x)
      if (net.idea_owner[x] == f && net.discovered.test(x) && !into[x]) {
        into[x] = 1;
        changed = true;
      }
    return changed;
  };
  for (std::size_t i = 0; i < net.n; ++i) own(i, know[i]);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < net.n; ++i)
      for (const auto& a : net.in[i]) {
        changed = own(a.source, know[i]) || changed;
        if (a.indirect)
          for (std::size_t x = 0; x < ideas; ++x)
            if (know[a.source][x] && !know[i][x]) {
              know[i][x] = 1;
              changed = true;
            }
      }
  }
  return know;
}

/// Learned sets I_i as sorted idea lists.
inline std::vector<std::vector<std::size_t>> naive_learned(const RealizedNetwork& net) {
  const auto know = naive_knowledge(net);
  std::vector<std::vector<std::size_t>> out(net.n);
  for (std::size_t i = 0; i < net.n; ++i)
    for (std::size_t x = 0; x < net.idea_count(); ++x)
      if (know[i][x] && net.idea_owner[x] != i) out[i].push_back(x);
  return out;
}

struct NaiveFirm {
  double pt = 0.0;
  double contested_m1 = 0.0;
  double contested_m2plus = 0.0;
  double gross = 0.0;
};

/// Scans every k-subset of discovered ideas and applies the payoff rules
/// literally. Each firm is credited once per technology, at its lowest own idea.
inline std::vector<NaiveFirm> naive_payoffs(const RealizedNetwork& net, const WorldConfig& world,
                                            const std::vector<FirmProfile>& profiles) {
  const auto know = naive_knowledge(net);
  std::vector<std::size_t> disc;
  for (std::size_t x = 0; x < net.idea_count(); ++x)
    if (net.discovered.test(x)) disc.push_back(x);
  std::vector<NaiveFirm> out(net.n);
  std::vector<double> all(net.n, 0.0);
  const bool patents = world.payoff.variant == PayoffVariant::patents;
  const std::size_t k = world.k;
  std::vector<std::size_t> t(k);
  auto visit = [&]() {
    std::vector<std::size_t> knowers;
    for (std::size_t j = 0; j < net.n; ++j) {
      bool all_known = true;
      for (auto x : t) all_known = all_known && know[j][x];
      if (all_known) knowers.push_back(j);
    }
    std::set<std::size_t> members;
    for (auto x : t) members.insert(net.idea_owner[x]);
    for (auto i : members) {
      if (std::find(knowers.begin(), knowers.end(), i) == knowers.end()) continue;
      bool blocked = false;
      if (patents)
        for (auto x : t) {
          const auto o = net.idea_owner[x];
          if (o != i && profiles[o].patented) blocked = true;
        }
      if (blocked) continue;
      all[i] += 1.0;
      const std::size_t m = knowers.size() - 1;
      const bool immune = profiles[i].is_public || (patents && profiles[i].patented);
      if (immune || m == 0) out[i].pt += 1.0;
      else if (m == 1) out[i].contested_m1 += 1.0;
      else out[i].contested_m2plus += 1.0;
      if (world.payoff.variant == PayoffVariant::competition && !immune)
        out[i].gross += world.payoff.f(m);
    }
  };
  auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == k) {
      visit();
      return;
    }
    for (std::size_t a = start; a < disc.size(); ++a) {
      t[depth] = disc[a];
      self(self, depth + 1, a + 1);
    }
  };
  rec(rec, 0, 0);
  std::vector<char> has_listener(net.n, 0);
  for (std::size_t i = 0; i < net.n; ++i)
    for (const auto& a : net.in[i]) has_listener[a.source] = 1;
  for (std::size_t i = 0; i < net.n; ++i) {
    const auto& f = profiles[i];
    auto& o = out[i];
    if (f.is_public || (patents && f.patented)) {
      o.gross = all[i];
      continue;
    }
    switch (world.payoff.variant) {
      case PayoffVariant::competition: break;
      case PayoffVariant::rho: o.gross = std::pow(o.pt, world.payoff.rho); break;
      case PayoffVariant::phi: {
        std::size_t learned = 0;
        for (std::size_t x = 0; x < net.idea_count(); ++x)
          learned += know[i][x] && net.idea_owner[x] != i;
        o.gross = net.any_discovered(i) && !has_listener[i]
                      ? world.payoff.phi_at(static_cast<double>(learned))
                      : 0.0;
        break;
      }
      default: o.gross = o.pt;
    }
  }
  return out;
}

/// Exact expected net payoff of every firm by enumerating all discovery
/// patterns and arc configurations. Feasible for n <= 4 (4^12 states at most).
inline std::vector<double> exact_expected_payoffs(const WorldConfig& world,
                                                  const std::vector<FirmProfile>& profiles) {
  const std::size_t n = profiles.size();
  require(n <= 4, "exact enumeration supports n <= 4");
  for (const auto& f : profiles) require(f.sigma == 1, "exact enumeration needs sigma = 1");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) pairs.emplace_back(i, j);
  // Per pair: absent, direct only, indirect.
  const bool two_state = world.delta == 0.0 || world.delta == 1.0;
  const std::size_t states = two_state ? 2 : 3;
  std::size_t configs = 1;
  for (std::size_t p = 0; p < pairs.size(); ++p) configs *= states;
  std::vector<double> expected(n, 0.0);
  std::vector<unsigned> sigma(n, 1);
  for (std::size_t c = 0; c < configs; ++c) {
    RealizedNetwork net(sigma);
    double prob = 1.0;
    std::size_t code = c;
    for (const auto& [i, j] : pairs) {
      const std::size_t s = code % states;
      code /= states;
      const double a = arc_probability(profiles[i], profiles[j]);
      if (two_state) {
        if (s == 0) {
          prob *= 1.0 - a;
        } else {
          prob *= a;
          net.add_arc(i, j, world.delta == 1.0);
        }
      } else {
        if (s == 0) prob *= 1.0 - a;
        else if (s == 1) { prob *= a * (1.0 - world.delta); net.add_arc(i, j, false); }
        else { prob *= a * world.delta; net.add_arc(i, j, true); }
      }
    }
    if (prob == 0.0) continue;
    for (std::size_t d = 0; d < (std::size_t{1} << n); ++d) {
      double pd = 1.0;
      net.discovered.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (d >> i & 1) {
          pd *= profiles[i].p;
          net.discovered.set(i);
        } else {
          pd *= 1.0 - profiles[i].p;
        }
      }
      if (pd == 0.0) continue;
      const auto pay = naive_payoffs(net, world, profiles);
      for (std::size_t i = 0; i < n; ++i) expected[i] += prob * pd * pay[i].gross;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double exp_links = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        exp_links += arc_probability(profiles[i], profiles[j]) +
                     arc_probability(profiles[j], profiles[i]);
    expected[i] -= (profiles[i].budget_mode ? 0.0 : world.cost.value(profiles[i].p)) +
                   world.link_cost * exp_links;
  }
  return expected;
}

/// Random small realization with cycles and mixed sigma.
inline RealizedNetwork random_network(Rng& rng, std::size_t n, double arc, double indirect,
                                      double disc, unsigned max_sigma) {
  std::vector<unsigned> sigma(n);
  for (auto& s : sigma) s = 1 + static_cast<unsigned>(rng.below(max_sigma));
  RealizedNetwork net(sigma);
  for (std::size_t x = 0; x < net.idea_count(); ++x)
    if (rng.uniform() < disc) net.discovered.set(x);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && rng.uniform() < arc) net.add_arc(i, j, rng.uniform() < indirect);
  return net;
}

}  // namespace innonet::oracle
