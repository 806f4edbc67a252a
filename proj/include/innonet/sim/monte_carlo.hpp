#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "innonet/core/parallel.hpp"
#include "innonet/model/types.hpp"
#include "innonet/sim/closure.hpp"
#include "innonet/sim/network.hpp"
#include "innonet/sim/payoff.hpp"

namespace innonet {

/// Runs fn(rep) for rep in [0, reps) and returns results in replication order.
template <typename Fn>
auto run_replications(std::size_t reps, unsigned threads, Fn&& fn) {
  using T = decltype(fn(std::size_t{0}));
  std::vector<T> out(reps);
  parallel_for(reps, threads, [&](std::size_t r) { out[r] = fn(r); });
  return out;
}

struct McOptions {
  std::size_t reps = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  ArcSampling sampling = ArcSampling::skip;
  CountingOptions counting;
};

struct PayoffEstimate {
  std::size_t reps = 0;
  std::vector<MeanSe> net;
  std::vector<MeanSe> gross;
  /// Mean over firms of net payoff, with SE across replications.
  MeanSe firm_average;
  bool estimated_counts = false;
};

/// Monte Carlo estimate of every firm's expected payoff. The result depends
/// only on (world, profiles, reps, seed), never on the thread count.
inline PayoffEstimate expected_payoffs(const WorldConfig& world,
                                       const std::vector<FirmProfile>& profiles,
                                       const McOptions& opt) {
  world.validate();
  validate_profiles(world, profiles);
  require(opt.reps >= 1, "reps must be >= 1");
  struct Rep {
    std::vector<double> net, gross;
    bool estimated = false;
  };
  const auto results = run_replications(opt.reps, opt.threads, [&](std::size_t r) {
    const auto key = replication_key(opt.seed, r);
    const auto net = sample_realization(profiles, world, key, opt.sampling);
    const auto ks = knowledge_closure(net);
    const auto rep = payoff_profile(ks, net, world, profiles, opt.counting, key);
    Rep out;
    for (const auto& f : rep.firms) {
      out.net.push_back(f.net);
      out.gross.push_back(f.gross);
      out.estimated = out.estimated || f.estimated;
    }
    return out;
  });
  PayoffEstimate est;
  est.reps = opt.reps;
  const std::size_t n = profiles.size();
  std::vector<double> column(opt.reps), column_gross(opt.reps), avg(opt.reps);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < opt.reps; ++r) {
      column[r] = results[r].net[i];
      column_gross[r] = results[r].gross[i];
    }
    est.net.push_back(mean_se(column));
    est.gross.push_back(mean_se(column_gross));
  }
  for (std::size_t r = 0; r < opt.reps; ++r) {
    avg[r] = pairwise_sum(results[r].net) / static_cast<double>(n);
    est.estimated_counts = est.estimated_counts || results[r].estimated;
  }
  est.firm_average = mean_se(avg);
  return est;
}

}  // namespace innonet
