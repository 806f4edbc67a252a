#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "innonet/core/combinatorics.hpp"
#include "innonet/core/errors.hpp"
#include "innonet/core/idea_set.hpp"
#include "innonet/core/parallel.hpp"
#include "innonet/core/rng.hpp"
#include "innonet/model/types.hpp"
#include "innonet/sim/closure.hpp"
#include "innonet/sim/counting.hpp"
#include "innonet/sim/network.hpp"
#include "innonet/sim/payoff.hpp"

namespace innonet {

/// Deviator's openness: one rate, or separate rates toward public and private partners.
struct Rates {
  double to_public = 0.0;
  double to_private = 0.0;

  static Rates uniform(double q) { return {q, q}; }
};

/// Outcome of one deviation (rates, p) averaged over replications.
struct DeviationValue {
  MeanSe payoff;
  /// E[gross] and its derivative in the deviator's own p.
  double gross = 0.0;
  double marginal = 0.0;
  double links = 0.0;
  double p = 0.0;
};

/// Per-replication quantities that do not depend on p: gross payoff for each
/// nonempty own-discovery pattern and the number of realized links.
struct DeviationSample {
  std::vector<double> pattern_gross;
  double links = 0.0;
};

/// Opponent realizations with the deviator removed, plus the uniforms that
/// decide the deviator's own arcs. Evaluating a candidate strategy is then a
/// scan over the opponents; every candidate sees the same draws.
class DeviationModel {
 public:
  DeviationModel(const WorldConfig& world, std::vector<FirmProfile> profiles,
                 std::size_t deviator, std::size_t reps, std::uint64_t seed, unsigned threads,
                 const CountingOptions& counting = {})
      : world_(world),
        profiles_(std::move(profiles)),
        deviator_(deviator),
        threads_(threads),
        counting_(counting) {
    world_.validate();
    require(deviator_ < profiles_.size(), "deviator index out of range");
    require(reps >= 1, "deviation model needs reps >= 1");
    const auto& d = profiles_[deviator_];
    require(d.sigma <= 16, "deviator sigma must be <= 16");
    blocked_ = patent_owners(world_, profiles_);
    layout_.reset(sigma_of(profiles_));
    const auto blocks = make_sender_blocks(profiles_, deviator_);
    const std::uint64_t dev_stream = stream_of(profiles_, deviator_);
    streams_.resize(profiles_.size());
    for (std::size_t j = 0; j < profiles_.size(); ++j) streams_[j] = stream_of(profiles_, j);
    reps_.resize(reps);
    parallel_for(reps, threads_, [&](std::size_t r) {
      thread_local RealizedNetwork net;
      thread_local Condensation cond;
      auto& c = reps_[r];
      const auto key = derive_seed(seed, 0xde1ULL, dev_stream, r);
      c.key = key;
      net.reset(sigma_of(profiles_));
      sample_discoveries(profiles_, key, net);
      for (auto x = net.idea_offset[deviator_]; x < net.idea_offset[deviator_ + 1]; ++x)
        net.discovered.reset(x);
      sample_arcs_skip(profiles_, world_, key, blocks, net, deviator_);
      cond.build(net);
      c.compress(net, cond);
    });
  }

  std::size_t reps() const noexcept { return reps_.size(); }
  const WorldConfig& world() const noexcept { return world_; }
  const FirmProfile& deviator_profile() const noexcept { return profiles_[deviator_]; }

  /// Deviator profile with the given rates (p untouched).
  FirmProfile with_rates(const Rates& x) const {
    FirmProfile f = profiles_[deviator_];
    if (f.directed()) {
      f.q_public = x.to_public;
      f.q_private = x.to_private;
      f.q = x.to_private;
    } else {
      f.q = x.to_private;
    }
    return f;
  }

  /// Per-replication p-free quantities for one candidate.
  std::vector<DeviationSample> samples(const Rates& x) const {
    const FirmProfile dev = with_rates(x);
    std::vector<DeviationSample> out(reps_.size());
    parallel_for(reps_.size(), threads_, [&](std::size_t r) { out[r] = evaluate(reps_[r], dev); });
    return out;
  }

  /// Probability of each own-discovery pattern (bit s = slot s discovered) and its p-derivative.
  static void pattern_weights(unsigned sigma, double p, std::vector<double>& w,
                              std::vector<double>& dw) {
    const std::size_t patterns = std::size_t{1} << sigma;
    w.assign(patterns, 0.0);
    dw.assign(patterns, 0.0);
    for (std::size_t s = 1; s < patterns; ++s) {
      const int a = std::popcount(s);
      const int b = static_cast<int>(sigma) - a;
      w[s] = std::pow(p, a) * std::pow(1.0 - p, b);
      dw[s] = (a > 0 ? a * std::pow(p, a - 1) * std::pow(1.0 - p, b) : 0.0) -
              (b > 0 ? b * std::pow(p, a) * std::pow(1.0 - p, b - 1) : 0.0);
    }
  }

  /// Investment probability implied by the deviator's rates (budget line or free p).
  double implied_p(const Rates& x, double p) const {
    const auto& d = profiles_[deviator_];
    if (!d.budget_mode) return p;
    return std::max(0.0, 1.0 - d.budget_lambda * x.to_private * static_cast<double>(profiles_.size()));
  }

  /// Expected payoff for the candidate at investment p.
  DeviationValue value(const std::vector<DeviationSample>& s, const Rates& x, double p) const {
    const auto& d = profiles_[deviator_];
    const double pe = implied_p(x, p);
    std::vector<double> w, dw;
    pattern_weights(d.sigma, pe, w, dw);
    const double cost = d.budget_mode ? 0.0 : world_.cost.value(pe);
    std::vector<double> u(s.size()), g(s.size()), m(s.size()), l(s.size());
    for (std::size_t r = 0; r < s.size(); ++r) {
      double gross = 0.0, marg = 0.0;
      for (std::size_t k = 1; k < s[r].pattern_gross.size(); ++k) {
        gross += w[k] * s[r].pattern_gross[k];
        marg += dw[k] * s[r].pattern_gross[k];
      }
      g[r] = gross;
      m[r] = marg;
      l[r] = s[r].links;
      u[r] = gross - cost - world_.link_cost * s[r].links;
    }
    DeviationValue v;
    v.payoff = mean_se(u);
    v.gross = mean_se(g).mean;
    v.marginal = mean_se(m).mean;
    v.links = mean_se(l).mean;
    v.p = pe;
    return v;
  }

  DeviationValue value(const Rates& x, double p) const { return value(samples(x), x, p); }

 private:
  /// One opponent realization, kept compact: the discovered ideas, the
  /// condensation's shared knowledge per component (sorted idea lists when
  /// short, bit rows otherwise) and the indirect learners of each firm.
  struct Rep {
    static constexpr std::uint32_t kDense = 0xffffffffu;

    std::uint64_t key = 0;
    IdeaSet discovered;
    std::vector<std::uint32_t> scc_of;
    std::vector<std::uint32_t> row_begin, row_len;
    std::vector<std::uint8_t> nontrivial;
    std::vector<std::uint32_t> sparse;
    std::vector<std::uint64_t> dense;
    std::vector<std::uint32_t> rev_start, rev;

    void compress(const RealizedNetwork& net, const Condensation& cond) {
      const std::size_t n = net.n, sccs = cond.scc_count(), words = cond.word_count();
      discovered = net.discovered;
      scc_of.resize(n);
      for (std::size_t i = 0; i < n; ++i) scc_of[i] = cond.scc_of(i);
      row_begin.resize(sccs);
      row_len.resize(sccs);
      nontrivial.resize(sccs);
      sparse.clear();
      dense.clear();
      for (std::size_t s = 0; s < sccs; ++s) {
        nontrivial[s] = cond.members(s).size() > 1;
        const auto row = cond.shared(s);
        std::size_t cnt = 0;
        for (auto w : row) cnt += static_cast<std::size_t>(std::popcount(w));
        if (cnt * 2 <= words) {
          row_begin[s] = static_cast<std::uint32_t>(sparse.size());
          row_len[s] = static_cast<std::uint32_t>(cnt);
          for (std::size_t w = 0; w < words; ++w)
            for (auto bits = row[w]; bits; bits &= bits - 1)
              sparse.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(bits)));
        } else {
          row_begin[s] = static_cast<std::uint32_t>(dense.size() / words);
          row_len[s] = kDense;
          dense.insert(dense.end(), row.begin(), row.end());
        }
      }
      sparse.shrink_to_fit();
      dense.shrink_to_fit();
      rev_start.assign(n + 1, 0);
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& a : net.in[i])
          if (a.indirect) ++rev_start[a.source + 1];
      for (std::size_t i = 0; i < n; ++i) rev_start[i + 1] += rev_start[i];
      rev.resize(rev_start[n]);
      std::vector<std::uint32_t> fill(rev_start.begin(), rev_start.end() - 1);
      for (std::size_t i = 0; i < n; ++i)
        for (const auto& a : net.in[i])
          if (a.indirect) rev[fill[a.source]++] = static_cast<std::uint32_t>(i);
    }

    /// out |= shared knowledge of component s.
    void add_shared(std::size_t s, IdeaSet& out) const {
      if (row_len[s] == kDense) {
        auto dst = out.words();
        const std::uint64_t* src = dense.data() + static_cast<std::size_t>(row_begin[s]) * dst.size();
        for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= src[w];
      } else {
        for (std::uint32_t e = row_begin[s]; e < row_begin[s] + row_len[s]; ++e) out.set(sparse[e]);
      }
    }
  };

  void add_own(const Rep& c, std::size_t firm, IdeaSet& out) const {
    for (auto x = layout_.idea_offset[firm]; x < layout_.idea_offset[firm + 1]; ++x)
      if (c.discovered.test(x)) out.set(x);
  }

  DeviationSample evaluate(const Rep& c, const FirmProfile& dev) const {
    const auto& net = layout_;
    const std::size_t n = net.n;
    const double delta = world_.delta;
    DeviationSample out;
    const unsigned sigma = dev.sigma;
    const std::size_t patterns = std::size_t{1} << sigma;
    out.pattern_gross.assign(patterns, 0.0);

    // Realized arcs of the deviator.
    IdeaSet know(net.idea_count());
    std::vector<std::uint32_t> direct_listeners, indirect_listeners;
    std::size_t links = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == deviator_) continue;
      const auto sj = streams_[j];
      if (hash_unit(c.key, stream::kDeviatorIn, sj) < arc_probability(dev, profiles_[j])) {
        ++links;
        if (hash_unit(c.key, stream::kDeviatorInFlag, sj) < delta) c.add_shared(c.scc_of[j], know);
        add_own(c, j, know);
      }
      if (hash_unit(c.key, stream::kDeviatorOut, sj) < arc_probability(profiles_[j], dev)) {
        ++links;
        (hash_unit(c.key, stream::kDeviatorOutFlag, sj) < delta ? indirect_listeners
                                                                : direct_listeners)
            .push_back(static_cast<std::uint32_t>(j));
      }
    }
    out.links = static_cast<double>(links);
    // Own ideas never enter learned knowledge.
    for (auto x = net.idea_offset[deviator_]; x < net.idea_offset[deviator_ + 1]; ++x) know.reset(x);
    const std::size_t learned = know.count();
    const bool has_listener = !direct_listeners.empty() || !indirect_listeners.empty();

    // W: firms reaching an indirect listener over indirect arcs (know everything the
    // deviator knows). V: firms reaching only direct-only listeners.
    std::vector<std::uint8_t> mark(n, 0);
    std::vector<std::uint32_t> queue;
    auto spread = [&](const std::vector<std::uint32_t>& seeds, std::uint8_t tag) {
      queue.clear();
      for (auto s : seeds)
        if (!mark[s]) {
          mark[s] = tag;
          queue.push_back(s);
        }
      for (std::size_t h = 0; h < queue.size(); ++h) {
        const auto v = queue[h];
        for (auto e = c.rev_start[v]; e < c.rev_start[v + 1]; ++e) {
          const auto l = c.rev[e];
          if (!mark[l]) {
            mark[l] = tag;
            queue.push_back(l);
          }
        }
      }
      return queue.size();
    };
    const std::size_t universal = spread(indirect_listeners, 1);
    spread(direct_listeners, 2);
    std::vector<std::uint32_t> partial = queue;

    const bool patents = world_.payoff.variant == PayoffVariant::patents;
    const bool immune = dev.is_public || (patents && dev.patented);
    const std::size_t k = world_.k;
    const std::size_t buckets = world_.payoff.priced_buckets();
    FamilyBuilder builder;
    IdeaSet own(net.idea_count()), pool(net.idea_count()), tmp(net.idea_count());
    std::vector<std::size_t> scc_weight(partial.empty() ? 0 : c.row_len.size(), 0);
    std::vector<std::uint32_t> touched;
    for (std::size_t s = 1; s < patterns; ++s) {
      own.clear();
      for (unsigned b = 0; b < sigma; ++b)
        if (s >> b & 1u) own.set(net.idea_offset[deviator_] + b);
      std::vector<Histogram> hs;
      for (unsigned b = 0; b < sigma; ++b) {
        if (!(s >> b & 1u)) continue;
        const std::size_t anchor = net.idea_offset[deviator_] + b;
        pool = know;
        for (unsigned b2 = b + 1; b2 < sigma; ++b2)
          if (s >> b2 & 1u) pool.set(net.idea_offset[deviator_] + b2);
        if (patents)
          pool.for_each([&](std::size_t x) {
            const auto o = net.idea_owner[x];
            if (o != deviator_ && blocked_[o]) pool.reset(x);
          });
        builder.reset(pool, k - 1);
        if (!immune && pool.count() >= k - 1) {
          for (std::size_t w = 0; w < universal; ++w) builder.add_universal();
          touched.clear();
          for (auto v : partial) {
            const auto sc = c.scc_of[v];
            if (c.nontrivial[sc]) {
              if (scc_weight[sc]++ == 0) touched.push_back(sc);
              continue;
            }
            tmp = own;
            c.add_shared(sc, tmp);
            add_own(c, v, tmp);
            builder.add(tmp);
          }
          for (auto sc : touched) {
            tmp = own;
            c.add_shared(sc, tmp);
            builder.add(tmp, scc_weight[sc]);
            scc_weight[sc] = 0;
          }
        }
        const auto fam = builder.finish();
        hs.push_back(count_histogram(fam, buckets, counting_, derive_seed(c.key, anchor, s)));
      }
      out.pattern_gross[s] = gross_from_histograms(world_, dev, hs, static_cast<double>(learned),
                                                   has_listener);
    }
    return out;
  }

  WorldConfig world_;
  std::vector<FirmProfile> profiles_;
  std::size_t deviator_;
  unsigned threads_;
  CountingOptions counting_;
  std::vector<char> blocked_;
  /// Idea numbering shared by every replication.
  RealizedNetwork layout_;
  std::vector<std::uint64_t> streams_;
  std::vector<Rep> reps_;
};

}  // namespace innonet
