#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "innonet/core/combinatorics.hpp"
#include "innonet/core/parallel.hpp"
#include "innonet/core/rng.hpp"
#include "innonet/model/types.hpp"
#include "innonet/sim/closure.hpp"
#include "innonet/sim/counting.hpp"
#include "innonet/sim/monte_carlo.hpp"
#include "innonet/sim/network.hpp"
#include "innonet/sim/payoff.hpp"

namespace innonet {

/// Distribution of tau(t) over one firm's proprietary technologies.
struct TauDistribution {
  std::vector<std::uint32_t> values;
  double mean = 0.0;
  /// Number of proprietary technologies the values represent.
  double technologies = 0.0;
  /// True when every proprietary technology was scored (no sampling).
  bool exhaustive = false;
  bool empty = true;
};

/// What each of the firm's in-links would teach it on its own: the source's
/// own ideas, plus (indirect links) the source's knowledge in the network with
/// the firm's in-links removed.
inline std::vector<IdeaSet> link_contributions(const RealizedNetwork& net, std::size_t firm) {
  std::vector<IdeaSet> out;
  std::vector<char> seen(net.n, 0);
  std::vector<std::uint32_t> queue, visited;
  for (const auto& a : net.in[firm]) {
    IdeaSet c(net.idea_count());
    net.add_own_discovered(a.source, c);
    if (a.indirect) {
      queue.assign(1, a.source);
      seen[a.source] = 1;
      visited.assign(1, a.source);
      for (std::size_t h = 0; h < queue.size(); ++h) {
        for (const auto& b : net.in[queue[h]]) {
          net.add_own_discovered(b.source, c);
          if (b.indirect && b.source != firm && !seen[b.source]) {
            seen[b.source] = 1;
            visited.push_back(b.source);
            queue.push_back(b.source);
          }
        }
      }
      for (auto v : visited) seen[v] = 0;
    }
    out.push_back(std::move(c));
  }
  return out;
}

/// Minimum number of links whose contributions cover `ideas`.
inline std::uint32_t min_link_cover(const std::vector<std::size_t>& ideas,
                                    const std::vector<IdeaSet>& links) {
  const std::size_t need = ideas.size();
  if (need == 0) return 0;
  const std::uint32_t full = (1u << need) - 1;
  std::vector<std::uint32_t> masks;
  for (const auto& l : links) {
    std::uint32_t m = 0;
    for (std::size_t b = 0; b < need; ++b)
      if (l.test(ideas[b])) m |= 1u << b;
    if (m && std::find(masks.begin(), masks.end(), m) == masks.end()) masks.push_back(m);
  }
  constexpr std::uint32_t kInf = 0xffffffffu;
  std::vector<std::uint32_t> dp(full + 1, kInf);
  dp[0] = 0;
  for (std::uint32_t s = 0; s <= full; ++s) {
    if (dp[s] == kInf) continue;
    for (auto m : masks) {
      const auto t = s | m;
      dp[t] = std::min(dp[t], dp[s] + 1);
    }
  }
  return dp[full];
}

/// Samples (or enumerates, when small) the firm's proprietary technologies
/// under the competition-free rule and scores tau(t) for each.
inline TauDistribution tau_statistics(const KnowledgeState& ks, const RealizedNetwork& net,
                                      std::size_t firm, const WorldConfig& world,
                                      std::size_t sample_size, std::uint64_t key,
                                      std::uint64_t enumerate_limit = 100000,
                                      bool checked = false) {
  if (!checked) ks.check_against(net);
  TauDistribution out;
  const std::size_t r = world.k - 1;
  const auto links = link_contributions(net, firm);
  FamilyBuilder builder;
  std::vector<std::size_t> tech;
  double sum = 0.0, weight_sum = 0.0;
  bool exhaustive = true;
  for (auto anchor = net.idea_offset[firm]; anchor < net.idea_offset[firm + 1]; ++anchor) {
    if (!net.discovered.test(anchor)) continue;
    const auto fam = anchor_family(ks, net, firm, anchor, world.k, {}, builder);
    if (fam.universal > 0) continue;
    const auto hist = count_histogram(fam, 3, CountingOptions{}, derive_seed(key, anchor));
    const double count = hist.at(0);
    if (count <= 0.0) continue;
    const auto ideas = builder.pool_ideas();
    auto proprietary = [&](const std::vector<std::size_t>& local) {
      for (const auto& s : fam.sets) {
        bool inside = true;
        for (auto x : local)
          if (!s.test(x)) {
            inside = false;
            break;
          }
        if (inside) return false;
      }
      return true;
    };
    auto score = [&](const std::vector<std::size_t>& local) {
      tech.clear();
      for (auto x : local) {
        const auto g = ideas[x];
        if (net.idea_owner[g] != firm) tech.push_back(g);
      }
      return min_link_cover(tech, links);
    };
    std::vector<std::uint32_t> vals;
    const u128 total = binom_exact(fam.pool, r);
    if (total <= enumerate_limit) {
      std::vector<std::size_t> local(r);
      auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
        if (depth == r) {
          if (proprietary(local)) vals.push_back(score(local));
          return;
        }
        for (std::size_t x = start; x + (r - depth) <= fam.pool; ++x) {
          local[depth] = x;
          self(self, depth + 1, x + 1);
        }
      };
      rec(rec, 0, 0);
    } else {
      exhaustive = false;
      Rng rng(derive_seed(key, stream::kTau, anchor));
      std::vector<std::size_t> local;
      const std::size_t max_attempts = 200 * sample_size;
      for (std::size_t att = 0; att < max_attempts && vals.size() < sample_size; ++att) {
        local.clear();
        for (std::size_t j = fam.pool - r; j < fam.pool; ++j) {
          const std::size_t t = rng.below(j + 1);
          local.push_back(std::find(local.begin(), local.end(), t) == local.end() ? t : j);
        }
        std::sort(local.begin(), local.end());
        if (proprietary(local)) vals.push_back(score(local));
      }
    }
    if (vals.empty()) continue;
    double s = 0.0;
    for (auto v : vals) s += v;
    sum += count * (s / static_cast<double>(vals.size()));
    weight_sum += count;
    out.values.insert(out.values.end(), vals.begin(), vals.end());
  }
  out.technologies = weight_sum;
  out.empty = out.values.empty();
  out.exhaustive = exhaustive && !out.empty;
  out.mean = weight_sum > 0.0 ? sum / weight_sum : 0.0;
  return out;
}

struct PooledTau {
  /// Proprietary-technology-weighted mean of tau over firms and replications.
  double mean = 0.0;
  double se = 0.0;
  double technologies = 0.0;
};

/// Pools tau over all firms (or the listed ones) across replications.
inline PooledTau pooled_tau(const WorldConfig& world, const std::vector<FirmProfile>& profiles,
                            const McOptions& opt, std::size_t sample_size = 200,
                            const std::vector<std::size_t>& firms = {}) {
  struct Acc {
    double num = 0.0, den = 0.0;
  };
  const auto per_rep = run_replications(opt.reps, opt.threads, [&](std::size_t rep) {
    const auto key = replication_key(opt.seed, rep);
    const auto net = sample_realization(profiles, world, key, opt.sampling);
    const auto ks = knowledge_closure(net);
    Acc acc;
    auto visit = [&](std::size_t i) {
      const auto d = tau_statistics(ks, net, i, world, sample_size, derive_seed(key, i),
                                    4 * sample_size, true);
      if (d.empty) return;
      acc.num += d.mean * d.technologies;
      acc.den += d.technologies;
    };
    if (firms.empty())
      for (std::size_t i = 0; i < net.n; ++i) visit(i);
    else
      for (auto i : firms) visit(i);
    return acc;
  });
  std::vector<double> num(per_rep.size()), den(per_rep.size());
  for (std::size_t r = 0; r < per_rep.size(); ++r) {
    num[r] = per_rep[r].num;
    den[r] = per_rep[r].den;
  }
  PooledTau out;
  const double sn = pairwise_sum(num), sd = pairwise_sum(den);
  out.technologies = sd;
  if (sd <= 0.0) return out;
  out.mean = sn / sd;
  // Delta-method SE of a ratio of sums.
  std::vector<double> resid(per_rep.size());
  for (std::size_t r = 0; r < per_rep.size(); ++r) resid[r] = num[r] - out.mean * den[r];
  const auto m = static_cast<double>(per_rep.size());
  if (m > 1) {
    std::vector<double> sq(resid.size());
    for (std::size_t r = 0; r < resid.size(); ++r) sq[r] = resid[r] * resid[r];
    out.se = std::sqrt(pairwise_sum(sq) / (m - 1.0) * m) / sd;
  }
  return out;
}

}  // namespace innonet
