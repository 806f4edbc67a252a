#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "innonet/core/combinatorics.hpp"
#include "innonet/core/errors.hpp"
#include "innonet/core/idea_set.hpp"
#include "innonet/core/rng.hpp"

namespace innonet {

/// Counts of r-subsets of a pool by competitor multiplicity m. Buckets
/// 0..size-2 are exact multiplicities; the last bucket holds every m >= size-1.
struct Histogram {
  std::vector<i128> h;
  bool estimated = false;
  /// Sampling variance of each bucket estimate (zero when exact).
  std::vector<double> variance;

  i128 total() const {
    i128 t = 0;
    for (auto v : h) t += v;
    return t;
  }
  double at(std::size_t m) const { return m < h.size() ? to_double(h[m]) : 0.0; }
  double tail_from(std::size_t m) const {
    double s = 0.0;
    for (std::size_t b = m; b < h.size(); ++b) s += to_double(h[b]);
    return s;
  }
};

/// Competitor sets restricted to a pool of P ideas, in local indices 0..P-1.
/// Sets equal to the whole pool are only counted (`universal`); sets with
/// fewer than r elements are dropped since they contain no r-subset.
struct CompetitorFamily {
  std::size_t pool = 0;
  std::size_t r = 0;
  std::size_t universal = 0;
  std::vector<IdeaSet> sets;
  std::vector<std::size_t> weight;

  std::size_t distinct() const noexcept { return sets.size(); }
};

/// Builds a CompetitorFamily from global-index knowledge sets: intersects with
/// the pool, classifies, deduplicates, and compresses to local indices.
class FamilyBuilder {
 public:
  void reset(const IdeaSet& pool, std::size_t r) {
    pool_ = pool;
    pool_count_ = pool.count();
    r_ = r;
    universal_ = 0;
    global_.clear();
    weight_.clear();
    index_.clear();
    if (scratch_.capacity() != pool.capacity()) scratch_ = IdeaSet(pool.capacity());
  }

  std::size_t pool_size() const noexcept { return pool_count_; }

  /// Adds one competitor (or `w` identical ones) whose full knowledge is `know`.
  void add(std::span<const std::uint64_t> know, std::size_t w = 1) {
    auto s = scratch_.words();
    auto p = pool_.words();
    std::size_t c = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      s[i] = know[i] & p[i];
      c += static_cast<std::size_t>(std::popcount(s[i]));
    }
    if (c == pool_count_) {
      universal_ += w;
      return;
    }
    if (c < r_) return;
    const auto h = scratch_.hash();
    auto& bucket = index_[h];
    for (auto idx : bucket)
      if (global_[idx] == scratch_) {
        weight_[idx] += w;
        return;
      }
    bucket.push_back(global_.size());
    global_.push_back(scratch_);
    weight_.push_back(w);
  }
  void add(const IdeaSet& know, std::size_t w = 1) { add(know.words(), w); }
  void add_universal(std::size_t w = 1) { universal_ += w; }

  CompetitorFamily finish() const {
    CompetitorFamily fam;
    fam.pool = pool_count_;
    fam.r = r_;
    fam.universal = universal_;
    fam.weight = weight_;
    // Rank of each pool word start.
    auto p = pool_.words();
    std::vector<std::size_t> rank(p.size() + 1, 0);
    for (std::size_t i = 0; i < p.size(); ++i)
      rank[i + 1] = rank[i] + static_cast<std::size_t>(std::popcount(p[i]));
    fam.sets.reserve(global_.size());
    for (const auto& g : global_) {
      IdeaSet local(pool_count_);
      g.for_each([&](std::size_t x) {
        const std::size_t w = x >> 6;
        const std::uint64_t below = p[w] & ((std::uint64_t{1} << (x & 63)) - 1);
        local.set(rank[w] + static_cast<std::size_t>(std::popcount(below)));
      });
      fam.sets.push_back(std::move(local));
    }
    return fam;
  }

  /// Local index of each pool idea, in increasing global order.
  std::vector<std::size_t> pool_ideas() const { return pool_.to_vector(); }

 private:
  IdeaSet pool_;
  IdeaSet scratch_;
  std::size_t pool_count_ = 0;
  std::size_t r_ = 0;
  std::size_t universal_ = 0;
  std::vector<IdeaSet> global_;
  std::vector<std::size_t> weight_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
};

namespace detail {

inline Histogram finalize_histogram(std::vector<i128> exact, std::size_t universal,
                                    std::size_t buckets, i128 total) {
  // `exact` holds multiplicities 0..buckets-2 before the universal shift.
  Histogram out;
  out.h.assign(buckets, 0);
  out.variance.assign(buckets, 0.0);
  i128 placed = 0;
  for (std::size_t m = 0; m + 1 < buckets; ++m) {
    if (m + universal + 1 < buckets) {
      out.h[m + universal] = exact[m];
      placed += exact[m];
    }
  }
  out.h[buckets - 1] = total - placed;
  return out;
}

}  // namespace detail

/// Inclusion-exclusion over the distinct partial competitor sets.
/// Uses the generating function sum_S x^{m(S)} = sum_L C(|cap L|, r) prod_{l in L} (x^{w_l} - 1).
inline Histogram histogram_ie(const CompetitorFamily& fam, std::size_t buckets,
                              std::size_t competitor_cap = 20) {
  if (fam.distinct() > competitor_cap)
    throw CompetitorCapExceeded("distinct competitor sets " + std::to_string(fam.distinct()) +
                                " exceed cap " + std::to_string(competitor_cap));
  const std::size_t terms = buckets - 1;
  const i128 total = static_cast<i128>(binom_exact(fam.pool, fam.r));
  std::vector<i128> acc(terms, 0);
  acc[0] = total;
  const std::size_t d = fam.distinct();
  std::vector<std::vector<i128>> poly(d + 1, std::vector<i128>(terms, 0));
  std::vector<IdeaSet> inter(d + 1, IdeaSet(fam.pool));
  poly[0][0] = 1;

  auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    for (std::size_t l = start; l < d; ++l) {
      if (depth == 0) {
        inter[1] = fam.sets[l];
      } else {
        inter[depth + 1].assign_and(inter[depth], fam.sets[l]);
      }
      const std::size_t c = inter[depth + 1].count();
      if (c < fam.r) continue;
      const auto& cur = poly[depth];
      auto& next = poly[depth + 1];
      const std::size_t w = fam.weight[l];
      for (std::size_t m = 0; m < terms; ++m) next[m] = -cur[m] + (m >= w ? cur[m - w] : 0);
      const i128 nl = static_cast<i128>(binom_exact(c, fam.r));
      for (std::size_t m = 0; m < terms; ++m) acc[m] += nl * next[m];
      self(self, depth + 1, l + 1);
    }
  };
  rec(rec, 0, 0);
  return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
}

/// Pruned enumeration. Ideas contained in every partial set ("generic") are
/// handled by a binomial factor; the search branches only on the rest.
/// Throws BudgetExceeded when more than `budget` search nodes are visited.
inline Histogram histogram_enumerate(const CompetitorFamily& fam, std::size_t buckets,
                                     std::uint64_t budget = 1'000'000) {
  const std::size_t terms = buckets - 1;
  const i128 total = static_cast<i128>(binom_exact(fam.pool, fam.r));
  std::vector<i128> acc(terms, 0);
  const std::size_t d = fam.distinct();
  if (d == 0) {
    acc[0] = total;
    return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
  }
  IdeaSet generic = fam.sets[0];
  for (std::size_t l = 1; l < d; ++l) generic &= fam.sets[l];
  const std::size_t g = generic.count();
  std::vector<std::size_t> special;
  for (std::size_t x = 0; x < fam.pool; ++x)
    if (!generic.test(x)) special.push_back(x);
  // membership[e]: which partial sets contain special element e.
  std::vector<IdeaSet> membership(special.size(), IdeaSet(d));
  for (std::size_t e = 0; e < special.size(); ++e)
    for (std::size_t l = 0; l < d; ++l)
      if (fam.sets[l].test(special[e])) membership[e].set(l);

  std::uint64_t nodes = 0;
  const std::size_t r = fam.r;
  std::vector<IdeaSet> alive(r + 1, IdeaSet(d));
  for (std::size_t l = 0; l < d; ++l) alive[0].set(l);
  auto bump = [&](std::size_t m, i128 v) {
    if (m < terms) acc[m] += v;
  };
  auto weight_of = [&](const IdeaSet& a) {
    std::size_t s = 0;
    a.for_each([&](std::size_t l) { s += fam.weight[l]; });
    return s;
  };
  auto rec = [&](auto&& self, std::size_t t, std::size_t next) -> void {
    if (++nodes > budget)
      throw BudgetExceeded("enumeration budget of " + std::to_string(budget) + " nodes exceeded");
    const IdeaSet& a = alive[t];
    const std::size_t rem = special.size() - next;
    if (a.empty()) {
      bump(0, static_cast<i128>(binom_exact(rem + g, r - t)));
      return;
    }
    bump(weight_of(a), static_cast<i128>(binom_exact(g, r - t)));
    if (t == r) return;
    for (std::size_t e = next; e < special.size(); ++e) {
      if (special.size() - e - 1 + g < r - t - 1) break;
      alive[t + 1].assign_and(a, membership[e]);
      self(self, t + 1, e + 1);
    }
  };
  rec(rec, 0, 0);
  return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
}

/// Enumerates the r-subsets inside each partial set and tallies their
/// multiplicity; cheap when the sets are small next to the pool. Throws
/// BudgetExceeded when sum_l C(|S_l|, r) exceeds `budget`.
inline Histogram histogram_cover(const CompetitorFamily& fam, std::size_t buckets,
                                 std::uint64_t budget = 1'000'000) {
  const std::size_t terms = buckets - 1;
  const std::size_t r = fam.r;
  const i128 total = static_cast<i128>(binom_exact(fam.pool, r));
  std::vector<i128> acc(terms, 0);
  if (r == 0 || fam.distinct() == 0) {
    acc[0] = total;
    return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
  }
  const std::size_t bits = static_cast<std::size_t>(std::bit_width(fam.pool));
  if (bits * r > 64) throw BudgetExceeded("cover keys do not fit in 64 bits");
  double cost = 0.0;
  for (const auto& set : fam.sets) cost += binom_real(static_cast<double>(set.count()), static_cast<double>(r));
  if (cost > static_cast<double>(budget))
    throw BudgetExceeded("cover enumeration of " + std::to_string(cost) + " subsets exceeds budget");
  std::unordered_map<std::uint64_t, std::size_t> mult;
  mult.reserve(static_cast<std::size_t>(cost) + 1);
  std::vector<std::size_t> members, idx(r);
  for (std::size_t l = 0; l < fam.distinct(); ++l) {
    members = fam.sets[l].to_vector();
    for (std::size_t j = 0; j < r; ++j) idx[j] = j;
    while (true) {
      std::uint64_t key = 0;
      for (std::size_t j = 0; j < r; ++j) key = key << bits | members[idx[j]];
      mult[key] += fam.weight[l];
      std::size_t j = r;
      while (j > 0 && idx[j - 1] == members.size() - r + j - 1) --j;
      if (j == 0) break;
      ++idx[j - 1];
      for (std::size_t t = j; t < r; ++t) idx[t] = idx[t - 1] + 1;
    }
  }
  i128 covered = 0;
  for (const auto& [key, m] : mult) {
    ++covered;
    if (m < terms) ++acc[m];
  }
  acc[0] = total - covered;
  return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
}

/// Exact count of uncovered subsets for r <= 2 from per-idea unions of the
/// sets containing that idea. Only the m = 0 bucket is resolved, so it needs
/// buckets <= 2 after the universal shift. Throws BudgetExceeded otherwise or
/// when sum_l |S_l| * words exceeds 64 * `budget`.
inline Histogram histogram_pairs(const CompetitorFamily& fam, std::size_t buckets,
                                 std::uint64_t budget = 1'000'000) {
  const std::size_t terms = buckets - 1;
  const std::size_t r = fam.r;
  if (r > 2 || terms > 1) throw BudgetExceeded("pair cover needs r <= 2 and a single exact bucket");
  const i128 total = static_cast<i128>(binom_exact(fam.pool, r));
  std::vector<i128> acc(terms, 0);
  if (terms == 0) return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
  if (r == 0 || fam.distinct() == 0) {
    acc[0] = total;
    return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
  }
  IdeaSet any(fam.pool);
  if (r == 1) {
    for (const auto& set : fam.sets) any |= set;
    acc[0] = static_cast<i128>(fam.pool - any.count());
    return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
  }
  const std::size_t words = fam.pool / 64 + 1;
  double cost = static_cast<double>(fam.pool) * static_cast<double>(words);
  for (const auto& set : fam.sets) cost += static_cast<double>(set.count()) * static_cast<double>(words);
  if (cost > 64.0 * static_cast<double>(budget))
    throw BudgetExceeded("pair cover of " + std::to_string(cost) + " word operations exceeds budget");
  std::vector<IdeaSet> partner(fam.pool, IdeaSet(fam.pool));
  for (const auto& set : fam.sets) {
    any |= set;
    set.for_each([&](std::size_t a) { partner[a] |= set; });
  }
  // Each covered pair {a, b} is seen from both ends.
  i128 covered = 0;
  any.for_each([&](std::size_t a) { covered += static_cast<i128>(partner[a].count() - 1); });
  acc[0] = total - covered / 2;
  return detail::finalize_histogram(std::move(acc), fam.universal, buckets, total);
}

/// Unbiased estimate from `samples` uniform r-subsets of the pool.
inline Histogram histogram_sample(const CompetitorFamily& fam, std::size_t buckets,
                                  std::size_t samples, std::uint64_t key) {
  const std::size_t terms = buckets - 1;
  const i128 total = static_cast<i128>(binom_exact(fam.pool, fam.r));
  Histogram out;
  out.h.assign(buckets, 0);
  out.variance.assign(buckets, 0.0);
  out.estimated = true;
  if (total == 0) return out;
  Rng rng(derive_seed(key, stream::kSampling));
  std::vector<std::size_t> hits(buckets, 0);
  std::vector<std::size_t> pick;
  for (std::size_t s = 0; s < samples; ++s) {
    // Floyd's algorithm for a uniform r-subset.
    pick.clear();
    for (std::size_t j = fam.pool - fam.r; j < fam.pool; ++j) {
      const std::size_t t = rng.below(j + 1);
      if (std::find(pick.begin(), pick.end(), t) == pick.end())
        pick.push_back(t);
      else
        pick.push_back(j);
    }
    std::size_t m = fam.universal;
    for (std::size_t l = 0; l < fam.distinct(); ++l) {
      bool inside = true;
      for (auto x : pick)
        if (!fam.sets[l].test(x)) {
          inside = false;
          break;
        }
      if (inside) m += fam.weight[l];
    }
    ++hits[std::min(m, terms)];
  }
  const double tot = to_double(total);
  for (std::size_t b = 0; b < buckets; ++b) {
    const double f = static_cast<double>(hits[b]) / static_cast<double>(samples);
    out.h[b] = static_cast<i128>(f * tot + 0.5);
    out.variance[b] = tot * tot * f * (1.0 - f) / static_cast<double>(samples);
  }
  return out;
}

enum class CountMethod { automatic, enumerate, inclusion_exclusion, pairs, cover, sampling };

struct CountingOptions {
  std::size_t competitor_cap = 20;
  std::uint64_t enum_budget = 1'000'000;
  std::size_t samples = 20000;
  CountMethod method = CountMethod::automatic;
};

/// Inclusion-exclusion when the family is small, then pair unions (r <= 2), subset covering or
/// pruned enumeration within budget, sampling as the last resort.
inline Histogram count_histogram(const CompetitorFamily& fam, std::size_t buckets,
                                 const CountingOptions& opt, std::uint64_t sample_key) {
  switch (opt.method) {
    case CountMethod::inclusion_exclusion: return histogram_ie(fam, buckets, opt.competitor_cap);
    case CountMethod::enumerate: return histogram_enumerate(fam, buckets, opt.enum_budget);
    case CountMethod::pairs: return histogram_pairs(fam, buckets, opt.enum_budget);
    case CountMethod::cover: return histogram_cover(fam, buckets, opt.enum_budget);
    case CountMethod::sampling: return histogram_sample(fam, buckets, opt.samples, sample_key);
    case CountMethod::automatic: break;
  }
  if (fam.distinct() <= opt.competitor_cap) return histogram_ie(fam, buckets, opt.competitor_cap);
  if (fam.r <= 2 && buckets <= 2) {
    try {
      return histogram_pairs(fam, buckets, opt.enum_budget);
    } catch (const BudgetExceeded&) {
    }
  }
  try {
    return histogram_cover(fam, buckets, opt.enum_budget);
  } catch (const BudgetExceeded&) {
  }
  try {
    return histogram_enumerate(fam, buckets, opt.enum_budget);
  } catch (const BudgetExceeded&) {
    return histogram_sample(fam, buckets, opt.samples, sample_key);
  }
}

}  // namespace innonet
