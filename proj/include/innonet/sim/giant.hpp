#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "innonet/core/errors.hpp"
#include "innonet/core/parallel.hpp"
#include "innonet/sim/closure.hpp"
#include "innonet/sim/monte_carlo.hpp"
#include "innonet/sim/network.hpp"

namespace innonet {

/// Learning by firms attached to the largest strongly connected component of the
/// indirect-learning graph.
struct GiantMeasurement {
  /// Mean |I_i| over firms that reach the largest component over indirect arcs.
  MeanSe learned;
  /// Share of firms that reach it.
  MeanSe attached_share;
  /// Share of firms inside it.
  MeanSe core_share;
};

struct GiantSample {
  double learned = 0.0;
  double attached = 0.0;
  double core = 0.0;
};

/// One realization: firms inside the largest component or with an indirect
/// path to it, and their mean number of learned ideas.
inline GiantSample giant_sample(const RealizedNetwork& net, const KnowledgeState& ks) {
  GiantSample out;
  const auto& cond = ks.condensation;
  if (net.n == 0 || cond.scc_count() == 0) return out;
  std::size_t giant = 0;
  for (std::size_t s = 1; s < cond.scc_count(); ++s)
    if (cond.members(s).size() > cond.members(giant).size()) giant = s;
  // Reverse indirect arcs: who learns indirectly from each firm.
  std::vector<std::vector<std::uint32_t>> rev(net.n);
  for (std::size_t i = 0; i < net.n; ++i)
    for (const auto& a : net.in[i])
      if (a.indirect) rev[a.source].push_back(static_cast<std::uint32_t>(i));
  std::vector<char> mark(net.n, 0);
  std::vector<std::uint32_t> queue(cond.members(giant).begin(), cond.members(giant).end());
  for (auto v : queue) mark[v] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (auto l : rev[queue[h]])
      if (!mark[l]) {
        mark[l] = 1;
        queue.push_back(l);
      }
  double total = 0.0;
  for (auto v : queue) total += static_cast<double>(ks.learned[v].count());
  const double n = static_cast<double>(net.n);
  out.learned = total / static_cast<double>(queue.size());
  out.attached = static_cast<double>(queue.size()) / n;
  out.core = static_cast<double>(cond.members(giant).size()) / n;
  return out;
}

inline GiantMeasurement giant_learning(const WorldConfig& world,
                                       const std::vector<FirmProfile>& profiles,
                                       const McOptions& opt) {
  world.validate();
  validate_profiles(world, profiles);
  require(opt.reps >= 1, "reps must be >= 1");
  const auto samples = run_replications(opt.reps, opt.threads, [&](std::size_t r) {
    const auto net = sample_realization(profiles, world, replication_key(opt.seed, r), opt.sampling);
    return giant_sample(net, knowledge_closure(net));
  });
  std::vector<double> learned, attached, core;
  for (const auto& s : samples) {
    learned.push_back(s.learned);
    attached.push_back(s.attached);
    core.push_back(s.core);
  }
  return {mean_se(learned), mean_se(attached), mean_se(core)};
}

}  // namespace innonet
