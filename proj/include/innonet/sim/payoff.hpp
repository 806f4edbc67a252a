#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "innonet/core/combinatorics.hpp"
#include "innonet/core/parallel.hpp"
#include "innonet/model/types.hpp"
#include "innonet/sim/closure.hpp"
#include "innonet/sim/counting.hpp"
#include "innonet/sim/network.hpp"

namespace innonet {

/// Which competition rules apply to one firm's technologies.
struct CountingRule {
  /// Own ideas of these firms may not appear in the firm's technologies.
  const std::vector<char>* blocked_owners = nullptr;
  /// Ignore competitors (public firms, patent holders).
  bool immune = false;
};

/// Pool of candidate companions for anchor idea `anchor` of `firm`: learned
/// ideas plus own discovered ideas above the anchor, minus blocked ideas.
inline IdeaSet anchor_pool(const KnowledgeState& ks, const RealizedNetwork& net,
                           std::size_t firm, std::size_t anchor, const CountingRule& rule) {
  IdeaSet pool = ks.learned[firm];
  for (auto x = anchor + 1; x < net.idea_offset[firm + 1]; ++x)
    if (net.discovered.test(x)) pool.set(x);
  if (rule.blocked_owners) {
    const auto& blocked = *rule.blocked_owners;
    pool.for_each([&](std::size_t x) {
      const auto owner = net.idea_owner[x];
      if (owner != firm && blocked[owner]) pool.reset(x);
    });
  }
  return pool;
}

/// Competitor family for one anchor: every other firm that knows the anchor,
/// with its knowledge restricted to the pool.
inline CompetitorFamily anchor_family(const KnowledgeState& ks, const RealizedNetwork& net,
                                      std::size_t firm, std::size_t anchor, std::size_t k,
                                      const CountingRule& rule, FamilyBuilder& builder) {
  const IdeaSet pool = anchor_pool(ks, net, firm, anchor, rule);
  builder.reset(pool, k - 1);
  if (rule.immune) return builder.finish();
  const auto& cond = ks.condensation;
  std::vector<std::size_t> per_scc_count;
  std::vector<std::uint32_t> touched;
  IdeaSet know(net.idea_count());
  ks.knows_idea[anchor].for_each([&](std::size_t j) {
    const auto s = cond.scc_of(j);
    if (cond.members(s).size() > 1) {
      if (per_scc_count.empty()) per_scc_count.assign(cond.scc_count(), 0);
      if (per_scc_count[s]++ == 0) touched.push_back(s);
      return;
    }
    cond.knowledge_of(net, j, know);
    builder.add(know);
  });
  // Members of a nontrivial component share one knowledge set.
  for (auto s : touched) builder.add(cond.shared(s), per_scc_count[s]);
  return builder.finish();
}

/// Histogram per discovered own idea (anchor), in slot order.
inline std::vector<Histogram> firm_histograms(const KnowledgeState& ks,
                                              const RealizedNetwork& net, std::size_t firm,
                                              std::size_t k, std::size_t buckets,
                                              const CountingRule& rule,
                                              const CountingOptions& opt,
                                              std::uint64_t sample_key) {
  std::vector<Histogram> out;
  FamilyBuilder builder;
  for (auto x = net.idea_offset[firm]; x < net.idea_offset[firm + 1]; ++x) {
    if (!net.discovered.test(x)) continue;
    const auto fam = anchor_family(ks, net, firm, x, k, rule, builder);
    out.push_back(count_histogram(fam, buckets, opt, derive_seed(sample_key, x)));
  }
  return out;
}

/// Proprietary technologies per discovered own idea by pruned enumeration.
/// Throws BudgetExceeded when the search exceeds `budget` nodes.
inline std::vector<i128> count_proprietary_exact(const KnowledgeState& ks,
                                                 const RealizedNetwork& net, std::size_t firm,
                                                 std::size_t k,
                                                 std::uint64_t budget = 1'000'000) {
  CountingOptions opt;
  opt.method = CountMethod::enumerate;
  opt.enum_budget = budget;
  std::vector<i128> out;
  for (const auto& h : firm_histograms(ks, net, firm, k, 3, {}, opt, 0)) out.push_back(h.h[0]);
  return out;
}

/// Same counts by inclusion-exclusion over competitors. Throws
/// CompetitorCapExceeded when an anchor has more than `cap` distinct competitor sets.
inline std::vector<i128> count_proprietary_ie(const KnowledgeState& ks,
                                              const RealizedNetwork& net, std::size_t firm,
                                              std::size_t k, std::size_t cap = 20) {
  CountingOptions opt;
  opt.method = CountMethod::inclusion_exclusion;
  opt.competitor_cap = cap;
  std::vector<i128> out;
  for (const auto& h : firm_histograms(ks, net, firm, k, 3, {}, opt, 0)) out.push_back(h.h[0]);
  return out;
}

struct FirmPayoff {
  double pt_count = 0.0;
  double contested_m1 = 0.0;
  double contested_m2plus = 0.0;
  double gross = 0.0;
  double cost = 0.0;
  double link_cost = 0.0;
  double net = 0.0;
  bool estimated = false;
};

struct PayoffReport {
  std::vector<FirmPayoff> firms;

  double mean_net() const {
    std::vector<double> v;
    for (const auto& f : firms) v.push_back(f.net);
    return mean_se(v).mean;
  }
  double total_net() const {
    std::vector<double> v;
    for (const auto& f : firms) v.push_back(f.net);
    return pairwise_sum(v);
  }
  double mean_gross() const {
    std::vector<double> v;
    for (const auto& f : firms) v.push_back(f.gross);
    return mean_se(v).mean;
  }

  static constexpr const char* kCsvHeader =
      "firm,pt_count,contested_m1,contested_m2plus,gross,cost,link_cost,net";

  std::string to_csv() const {
    std::string out = std::string(kCsvHeader) + "\n";
    char buf[256];
    for (std::size_t i = 0; i < firms.size(); ++i) {
      const auto& f = firms[i];
      std::snprintf(buf, sizeof buf, "%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", i,
                    f.pt_count, f.contested_m1, f.contested_m2plus, f.gross, f.cost,
                    f.link_cost, f.net);
      out += buf;
    }
    return out;
  }
};

/// Investment cost of a firm; budget-mode firms pay through the budget line instead.
inline double investment_cost(const WorldConfig& world, const FirmProfile& f) {
  return f.budget_mode ? 0.0 : world.cost.value(f.p);
}

/// Gross payoff from per-anchor histograms under the world's payoff variant.
inline double gross_from_histograms(const WorldConfig& world, const FirmProfile& f,
                                    const std::vector<Histogram>& hs, double learned_count,
                                    bool has_listener) {
  const auto& spec = world.payoff;
  double pt = 0.0, all = 0.0;
  for (const auto& h : hs) {
    pt += h.at(0);
    all += to_double(h.total());
  }
  if (f.is_public) return all;
  if (spec.variant == PayoffVariant::patents && f.patented) return all;
  switch (spec.variant) {
    case PayoffVariant::baseline:
    case PayoffVariant::patents:
    case PayoffVariant::public_innovators: return pt;
    case PayoffVariant::rho: return std::pow(pt, spec.rho);
    case PayoffVariant::competition: {
      double g = 0.0;
      for (const auto& h : hs)
        for (std::size_t m = 0; m < h.h.size(); ++m) g += spec.f(m) * h.at(m);
      return g;
    }
    case PayoffVariant::phi:
      return (!hs.empty() && !has_listener) ? spec.phi_at(learned_count) : 0.0;
  }
  return pt;
}

inline std::vector<char> patent_owners(const WorldConfig& world,
                                       const std::vector<FirmProfile>& profiles) {
  std::vector<char> blocked(profiles.size(), 0);
  if (world.payoff.variant == PayoffVariant::patents)
    for (std::size_t i = 0; i < profiles.size(); ++i) blocked[i] = profiles[i].patented;
  return blocked;
}

inline CountingRule rule_for(const WorldConfig& world, const FirmProfile& f,
                             const std::vector<char>& blocked) {
  CountingRule rule;
  const bool patents = world.payoff.variant == PayoffVariant::patents;
  if (patents) rule.blocked_owners = &blocked;
  rule.immune = f.is_public || (patents && f.patented);
  return rule;
}

/// Realized payoffs of every firm.
inline PayoffReport payoff_profile(const KnowledgeState& ks, const RealizedNetwork& net,
                                   const WorldConfig& world,
                                   const std::vector<FirmProfile>& profiles,
                                   const CountingOptions& opt = {},
                                   std::uint64_t sample_key = 0) {
  ks.check_against(net);
  require(profiles.size() == net.n, "profile count must match the network");
  const std::size_t buckets = world.payoff.multiplicity_buckets();
  const auto blocked = patent_owners(world, profiles);
  std::vector<std::size_t> out_degree(net.n, 0);
  for (std::size_t i = 0; i < net.n; ++i)
    for (const auto& a : net.in[i]) ++out_degree[a.source];

  PayoffReport rep;
  rep.firms.resize(net.n);
  for (std::size_t i = 0; i < net.n; ++i) {
    const auto& f = profiles[i];
    const auto rule = rule_for(world, f, blocked);
    const auto hs = firm_histograms(ks, net, i, world.k, buckets, rule, opt,
                                    derive_seed(sample_key, i));
    auto& out = rep.firms[i];
    for (const auto& h : hs) {
      out.pt_count += rule.immune ? to_double(h.total()) : h.at(0);
      if (!rule.immune) {
        out.contested_m1 += h.at(1);
        out.contested_m2plus += h.tail_from(2);
      }
      out.estimated = out.estimated || h.estimated;
    }
    out.gross = gross_from_histograms(world, f, hs,
                                      static_cast<double>(ks.learned[i].count()),
                                      out_degree[i] > 0);
    out.cost = investment_cost(world, f);
    out.link_cost = world.link_cost * static_cast<double>(net.in[i].size() + out_degree[i]);
    out.net = out.gross - out.cost - out.link_cost;
  }
  return rep;
}

}  // namespace innonet
