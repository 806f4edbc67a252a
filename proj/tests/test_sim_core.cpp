#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "innonet/innonet.hpp"
#include "innonet/oracle/brute_force.hpp"

using namespace innonet;

namespace {

std::string data_file(const std::string& name) { return std::string(INNONET_DATA_DIR) + "/" + name; }

WorldConfig world_k(std::size_t n, std::size_t k, double delta = 1.0) {
  WorldConfig w;
  w.n = n;
  w.k = k;
  w.delta = delta;
  return w;
}

std::vector<std::size_t> to_sizes(const IdeaSet& s) {
  std::vector<std::size_t> v;
  s.for_each([&](std::size_t x) { v.push_back(x); });
  return v;
}

using oracle::random_network;

}  // namespace

TEST(Replay, FirstRealizationKnowledge) {
  const auto net = load_replay(data_file("figure1.txt"));
  ASSERT_EQ(net.n, 4u);
  const auto ks = knowledge_closure(net);
  EXPECT_EQ(to_sizes(ks.learned[0]), (std::vector<std::size_t>{2}));
  EXPECT_TRUE(ks.learned[1].empty());
  EXPECT_EQ(to_sizes(ks.learned[2]), (std::vector<std::size_t>{0, 3}));
  EXPECT_TRUE(ks.learned[3].empty());
}

TEST(Replay, FirstRealizationPayoffs) {
  const auto net = load_replay(data_file("figure1.txt"));
  const auto ks = knowledge_closure(net);
  const auto world = world_k(4, 3);
  const auto profiles = symmetric_profiles(4, 0.5, 0.5);
  const auto rep = payoff_profile(ks, net, world, profiles);
  const std::vector<double> gross{0, 0, 1, 0};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rep.firms[i].gross, gross[i]) << i;
  const auto pt = count_proprietary_exact(ks, net, 2, 3);
  ASSERT_EQ(pt.size(), 1u);
  EXPECT_TRUE(pt[0] == 1);
  const auto csv = rep.to_csv();
  EXPECT_NE(csv.find("\n2,1,0,0,1,"), std::string::npos) << csv;
}

TEST(Replay, SecondRealizationAllZero) {
  const auto net = load_replay(data_file("figure2.txt"));
  const auto ks = knowledge_closure(net);
  auto world = world_k(4, 3);
  const auto profiles = symmetric_profiles(4, 0.5, 0.5);
  const auto rep = payoff_profile(ks, net, world, profiles);
  for (const auto& f : rep.firms) EXPECT_EQ(f.gross, 0.0);
  EXPECT_EQ(rep.firms[0].contested_m1, 1.0);
  EXPECT_EQ(rep.firms[2].contested_m1, 1.0);

  world.payoff.variant = PayoffVariant::competition;
  world.payoff.competition = {0.5};
  const auto comp = payoff_profile(ks, net, world, profiles);
  EXPECT_DOUBLE_EQ(comp.firms[0].gross, 0.5);
  EXPECT_DOUBLE_EQ(comp.firms[2].gross, 0.5);
  EXPECT_DOUBLE_EQ(comp.firms[1].gross, 0.0);
}

TEST(Replay, SecondRealizationPatents) {
  const auto net = load_replay(data_file("figure2.txt"));
  const auto ks = knowledge_closure(net);
  auto world = world_k(4, 3);
  world.payoff.variant = PayoffVariant::patents;
  auto profiles = symmetric_profiles(4, 0.5, 0.5);
  profiles[0].patented = true;
  const auto rep = payoff_profile(ks, net, world, profiles);
  EXPECT_EQ(rep.firms[0].gross, 1.0);
  EXPECT_EQ(rep.firms[2].gross, 0.0);
  const auto naive = oracle::naive_payoffs(net, world, profiles);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rep.firms[i].gross, naive[i].gross) << i;
}

TEST(Replay, FirstRealizationPatentedFirstFirm) {
  const auto net = load_replay(data_file("figure1.txt"));
  const auto ks = knowledge_closure(net);
  auto world = world_k(4, 3);
  world.payoff.variant = PayoffVariant::patents;
  auto profiles = symmetric_profiles(4, 0.5, 0.5);
  profiles[0].patented = true;
  const auto rep = payoff_profile(ks, net, world, profiles);
  for (const auto& f : rep.firms) EXPECT_EQ(f.gross, 0.0);
}

TEST(Replay, RoundTripAndErrors) {
  const auto net = load_replay(data_file("figure1.txt"));
  std::istringstream is(serialize_replay(net));
  const auto back = parse_replay(is);
  EXPECT_EQ(back.fingerprint(), net.fingerprint());

  std::istringstream bad("FIRMS 3\nDIRECT\n0 1\nINDIRECT\n1 0\n");
  EXPECT_THROW(parse_replay(bad), InvalidInput);
  std::istringstream outside("0 1\n");
  EXPECT_THROW(parse_replay(outside), InvalidInput);
}

TEST(Replay, StaleKnowledgeRejected) {
  auto net = load_replay(data_file("figure1.txt"));
  const auto ks = knowledge_closure(net);
  net.add_arc(1, 3, true);
  EXPECT_THROW(payoff_profile(ks, net, world_k(4, 3), symmetric_profiles(4, 0.5, 0.5)),
               IntegrityError);
}

TEST(Tau, FirstRealizationFirmThree) {
  const auto net = load_replay(data_file("figure1.txt"));
  const auto ks = knowledge_closure(net);
  const auto d = tau_statistics(ks, net, 2, world_k(4, 3), 100, 1);
  ASSERT_FALSE(d.empty);
  EXPECT_TRUE(d.exhaustive);
  EXPECT_EQ(d.values, (std::vector<std::uint32_t>{2}));
  EXPECT_DOUBLE_EQ(d.mean, 2.0);
}

TEST(Sampling, DiscoveryRate) {
  const std::size_t n = 20000;
  const auto profiles = symmetric_profiles(n, 0.3, 0.0);
  const auto net = sample_realization(profiles, world_k(n, 2, 0.0), replication_key(7, 0));
  const double rate = static_cast<double>(net.discovered.count()) / static_cast<double>(n);
  EXPECT_NEAR(rate, 0.3, 4.0 * std::sqrt(0.21 / n));
}

TEST(Sampling, DegreeAndIndirectShare) {
  const std::size_t n = 3000;
  const double q = 0.05, delta = 0.4;
  const auto profiles = symmetric_profiles(n, 0.5, q);
  for (auto mode : {ArcSampling::skip, ArcSampling::pairwise}) {
    const auto net =
        sample_learning_network(profiles, world_k(n, 2, delta), replication_key(11, 0), mode);
    const double arcs = static_cast<double>(net.direct_arc_count());
    const double expect = static_cast<double>(n) * (n - 1) * q * q;
    EXPECT_NEAR(arcs, expect, 5.0 * std::sqrt(expect));
    const double share = static_cast<double>(net.indirect_arc_count()) / arcs;
    EXPECT_NEAR(share, delta, 5.0 * std::sqrt(delta * (1 - delta) / arcs));
  }
}

TEST(Sampling, SkipMatchesPairwiseInDistribution) {
  // Heterogeneous blocks: mean in-degree per learner class agrees across samplers.
  const std::size_t n = 400;
  auto profiles = symmetric_profiles(n, 0.5, 0.1);
  for (std::size_t i = 0; i < n; i += 2) profiles[i].q = 0.2;
  for (std::size_t i = 0; i < n; i += 5) profiles[i].beta = 0.5;
  double a_skip = 0, a_pair = 0;
  for (std::size_t r = 0; r < 20; ++r) {
    a_skip += static_cast<double>(
        sample_learning_network(profiles, world_k(n, 2), replication_key(3, r)).direct_arc_count());
    a_pair += static_cast<double>(sample_learning_network(profiles, world_k(n, 2),
                                                          replication_key(3, r),
                                                          ArcSampling::pairwise)
                                      .direct_arc_count());
  }
  double expect = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) expect += arc_probability(profiles[i], profiles[j]);
  expect *= 20;
  EXPECT_NEAR(a_skip, expect, 5 * std::sqrt(expect));
  EXPECT_NEAR(a_pair, expect, 5 * std::sqrt(expect));
}

TEST(Sampling, ExcludedFirmIsIsolated) {
  const std::size_t n = 200;
  const auto profiles = symmetric_profiles(n, 0.5, 0.3);
  RealizedNetwork net(sigma_of(profiles));
  sample_learning_network(profiles, world_k(n, 2), 5, net, ArcSampling::skip, 17);
  EXPECT_TRUE(net.in[17].empty());
  for (std::size_t i = 0; i < n; ++i) EXPECT_FALSE(net.has_arc(i, 17));
}

TEST(Closure, MatchesNaiveFixedPoint) {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng.below(25);
    const auto net = random_network(rng, n, rng.uniform() * 0.3, rng.uniform(), 0.7, 3);
    const auto ks = knowledge_closure(net, true);
    const auto naive = oracle::naive_learned(net);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(to_sizes(ks.learned[i]), naive[i]) << trial;
    for (std::size_t x = 0; x < net.idea_count(); ++x)
      for (std::size_t i = 0; i < n; ++i)
        ASSERT_EQ(ks.knows_idea[x].test(i), ks.learned[i].test(x));
  }
}

TEST(Counting, ExactEqualsInclusionExclusion) {
  Rng rng(2024);
  int compared = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + rng.below(28);
    const std::size_t k = 2 + rng.below(3);
    const auto net =
        random_network(rng, n, 0.02 + rng.uniform() * 0.15, rng.uniform(), 0.8, 2);
    const auto ks = knowledge_closure(net);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<i128> a, b;
      try {
        a = count_proprietary_ie(ks, net, i, k);
      } catch (const CompetitorCapExceeded&) {
        continue;
      }
      b = count_proprietary_exact(ks, net, i, k);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t s = 0; s < a.size(); ++s) ASSERT_TRUE(a[s] == b[s]) << trial << " " << i;
      ++compared;
    }
  }
  EXPECT_GT(compared, 1000);
}

TEST(Counting, CoverEqualsEnumeration) {
  Rng rng(31);
  FamilyBuilder builder;
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + rng.below(40);
    const std::size_t k = 2 + rng.below(3);
    const auto net = random_network(rng, n, 0.05 + rng.uniform() * 0.2, rng.uniform(), 0.8, 2);
    const auto ks = knowledge_closure(net);
    for (std::size_t i = 0; i < n; ++i)
      for (auto x = net.idea_offset[i]; x < net.idea_offset[i + 1]; ++x) {
        if (!net.discovered.test(x)) continue;
        const auto fam = anchor_family(ks, net, i, x, k, {}, builder);
        const auto a = histogram_cover(fam, 4, 100'000'000);
        const auto b = histogram_enumerate(fam, 4, 100'000'000);
        for (std::size_t m = 0; m < 4; ++m) ASSERT_TRUE(a.h[m] == b.h[m]) << trial << " " << m;
        ++compared;
      }
  }
  EXPECT_GT(compared, 1000);
}

TEST(Counting, PairsEqualsEnumeration) {
  Rng rng(37);
  FamilyBuilder builder;
  int compared = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + rng.below(40);
    const std::size_t k = 2 + rng.below(2);
    const auto net = random_network(rng, n, 0.05 + rng.uniform() * 0.3, rng.uniform(), 0.8, 2);
    const auto ks = knowledge_closure(net);
    for (std::size_t i = 0; i < n; ++i)
      for (auto x = net.idea_offset[i]; x < net.idea_offset[i + 1]; ++x) {
        if (!net.discovered.test(x)) continue;
        const auto fam = anchor_family(ks, net, i, x, k, {}, builder);
        const auto a = histogram_pairs(fam, 2, 100'000'000);
        const auto b = histogram_enumerate(fam, 2, 100'000'000);
        for (std::size_t m = 0; m < 2; ++m) ASSERT_TRUE(a.h[m] == b.h[m]) << trial << " " << m;
        ++compared;
      }
  }
  EXPECT_GT(compared, 1000);
  CompetitorFamily fam;
  fam.pool = 5;
  fam.r = 3;
  EXPECT_THROW(histogram_pairs(fam, 2), BudgetExceeded);
}

TEST(Counting, EngineMatchesNaiveForAllVariants) {
  Rng rng(77);
  const std::vector<PayoffVariant> variants{PayoffVariant::baseline, PayoffVariant::rho,
                                            PayoffVariant::phi, PayoffVariant::competition,
                                            PayoffVariant::patents,
                                            PayoffVariant::public_innovators};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(10);
    const std::size_t k = 2 + rng.below(3);
    const auto net = random_network(rng, n, 0.3, 0.6, 0.7, 2);
    const auto ks = knowledge_closure(net);
    auto profiles = symmetric_profiles(n, 0.5, 0.5);
    for (std::size_t i = 0; i < n; ++i) profiles[i].sigma = net.sigma(i);
    for (auto v : variants) {
      auto world = world_k(n, k);
      world.payoff.variant = v;
      world.payoff.rho = 0.7;
      world.payoff.phi = {0.0, 1.0, 1.5};
      world.payoff.competition = {0.5, -0.25, 0.1};
      for (std::size_t i = 0; i < n; ++i) {
        profiles[i].patented = v == PayoffVariant::patents && rng.uniform() < 0.3;
        profiles[i].is_public = v == PayoffVariant::public_innovators && rng.uniform() < 0.3;
      }
      const auto rep = payoff_profile(ks, net, world, profiles);
      const auto naive = oracle::naive_payoffs(net, world, profiles);
      for (std::size_t i = 0; i < n; ++i) {
        ASSERT_NEAR(rep.firms[i].gross, naive[i].gross, 1e-9)
            << to_string(v) << " trial " << trial << " firm " << i;
        ASSERT_EQ(rep.firms[i].pt_count, naive[i].pt);
        ASSERT_EQ(rep.firms[i].contested_m1, naive[i].contested_m1);
        ASSERT_EQ(rep.firms[i].contested_m2plus, naive[i].contested_m2plus);
      }
    }
  }
}

TEST(Counting, SamplingIsCloseToExact) {
  Rng rng(5);
  const auto net = random_network(rng, 30, 0.2, 0.5, 0.9, 2);
  const auto ks = knowledge_closure(net);
  FamilyBuilder builder;
  for (std::size_t i = 0; i < net.n; ++i) {
    for (auto x = net.idea_offset[i]; x < net.idea_offset[i + 1]; ++x) {
      if (!net.discovered.test(x)) continue;
      const auto fam = anchor_family(ks, net, i, x, 3, {}, builder);
      const auto exact = histogram_enumerate(fam, 3, 10'000'000);
      const auto est = histogram_sample(fam, 3, 20000, 9);
      for (std::size_t b = 0; b < 3; ++b)
        EXPECT_NEAR(est.at(b), exact.at(b), 5.0 * std::sqrt(est.variance[b]) + 1.0);
    }
  }
}

TEST(Counting, BudgetAndCapAreEnforced) {
  // Many competitors with distinct partial knowledge of a large pool.
  const std::size_t n = 60;
  RealizedNetwork net(std::vector<unsigned>(n, 1));
  for (std::size_t x = 0; x < n; ++x) net.discovered.set(x);
  for (std::size_t j = 1; j < n; ++j) net.add_arc(0, j, false);
  for (std::size_t c = 1; c < 40; ++c) {
    net.add_arc(c, 0, false);
    for (std::size_t j = 1; j < n; ++j)
      if (j != c && (j * 7 + c * 3) % 5 != 0) net.add_arc(c, j, false);
  }
  const auto ks = knowledge_closure(net);
  EXPECT_THROW(count_proprietary_ie(ks, net, 0, 4), CompetitorCapExceeded);
  EXPECT_THROW(count_proprietary_exact(ks, net, 0, 4, 1000), BudgetExceeded);
  CountingOptions opt;
  const auto hs = firm_histograms(ks, net, 0, 4, 3, {}, opt, 1);
  ASSERT_EQ(hs.size(), 1u);
  EXPECT_TRUE(hs[0].total() == static_cast<i128>(binom_exact(n - 1, 3)));
}

TEST(Properties, ProprietaryOwnerIsUnique) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng.below(12);
    const std::size_t k = 2 + rng.below(2);
    const auto net = random_network(rng, n, 0.25, 0.5, 0.8, 1);
    const auto ks = knowledge_closure(net);
    const auto rep = payoff_profile(ks, net, world_k(n, k), symmetric_profiles(n, 0.5, 0.5));
    double total = 0;
    for (const auto& f : rep.firms) total += f.pt_count;
    const auto d = static_cast<double>(net.discovered.count());
    EXPECT_LE(total, binom_real(d, static_cast<double>(k)));
    // A firm's proprietary count never exceeds C(|I_i|+own, k) minus own-only sets.
    for (std::size_t i = 0; i < n; ++i)
      EXPECT_LE(rep.firms[i].pt_count,
                binom_real(static_cast<double>(ks.knowledge(net, i).count()),
                           static_cast<double>(k)));
  }
}

TEST(Properties, PairwiseSamplingIsMonotoneInOpenness) {
  const std::size_t n = 300;
  const auto world = world_k(n, 3, 0.5);
  auto lo = symmetric_profiles(n, 0.5, 0.08);
  auto hi = lo;
  for (std::size_t i = 0; i < n; i += 3) hi[i].q = 0.15;
  for (std::size_t r = 0; r < 5; ++r) {
    const auto key = replication_key(99, r);
    const auto a = sample_realization(lo, world, key, ArcSampling::pairwise);
    const auto b = sample_realization(hi, world, key, ArcSampling::pairwise);
    ASSERT_TRUE(a.discovered == b.discovered);
    for (std::size_t i = 0; i < n; ++i)
      for (const auto& arc : a.in[i]) ASSERT_TRUE(b.has_arc(i, arc.source));
    const auto ka = knowledge_closure(a), kb = knowledge_closure(b);
    for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(ka.learned[i].subset_of(kb.learned[i]));
  }
}

TEST(Properties, RelabelingPermutesPayoffs) {
  const std::size_t n = 40;
  const auto world = world_k(n, 3, 0.6);
  auto profiles = symmetric_profiles(n, 0.6, 0.2);
  for (std::size_t i = 0; i < n; ++i) profiles[i].stream = 1000 + i;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(8);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<FirmProfile> permuted(n);
  for (std::size_t i = 0; i < n; ++i) permuted[perm[i]] = profiles[i];
  for (std::size_t r = 0; r < 5; ++r) {
    const auto key = replication_key(4, r);
    const auto a = sample_realization(profiles, world, key, ArcSampling::pairwise);
    const auto b = sample_realization(permuted, world, key, ArcSampling::pairwise);
    const auto pa = payoff_profile(knowledge_closure(a), a, world, profiles);
    const auto pb = payoff_profile(knowledge_closure(b), b, world, permuted);
    for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(pa.firms[i].gross, pb.firms[perm[i]].gross);
  }
}

TEST(Properties, FullIndirectPayoffFormula) {
  // With delta = 1 a firm keeps a technology iff nobody learns from it.
  const std::size_t n = 25, k = 3;
  const auto world = world_k(n, k, 1.0);
  const auto profiles = symmetric_profiles(n, 0.6, 0.15);
  for (std::size_t r = 0; r < 30; ++r) {
    const auto net = sample_realization(profiles, world, replication_key(12, r));
    const auto ks = knowledge_closure(net);
    const auto rep = payoff_profile(ks, net, world, profiles);
    const auto listeners = net.listeners();
    for (std::size_t i = 0; i < n; ++i) {
      const double expect =
          net.any_discovered(i) && listeners[i].empty()
              ? to_double(static_cast<i128>(binom_exact(ks.learned[i].count(), k - 1)))
              : 0.0;
      ASSERT_EQ(rep.firms[i].gross, expect) << r << " " << i;
    }
  }
}

TEST(MonteCarlo, DeterministicAcrossThreads) {
  const std::size_t n = 150;
  const auto world = world_k(n, 3, 0.7);
  const auto profiles = symmetric_profiles(n, 0.5, 0.1);
  McOptions opt;
  opt.reps = 24;
  opt.seed = 123;
  std::vector<double> ref;
  for (unsigned t : {1u, 2u, 8u}) {
    opt.threads = t;
    const auto est = expected_payoffs(world, profiles, opt);
    std::vector<double> flat;
    for (const auto& m : est.net) {
      flat.push_back(m.mean);
      flat.push_back(m.se);
    }
    if (ref.empty()) ref = flat;
    else ASSERT_EQ(flat, ref) << "threads " << t;
  }
}

TEST(MonteCarlo, ClosedFirmsPayOnlyCost) {
  const std::size_t n = 30;
  const auto world = world_k(n, 3, 0.5);
  auto profiles = symmetric_profiles(n, 0.4, 0.0);
  profiles[3].p = 0.7;
  McOptions opt;
  opt.reps = 50;
  const auto est = expected_payoffs(world, profiles, opt);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(est.net[i].mean, -world.cost.value(profiles[i].p));
    EXPECT_EQ(est.net[i].se, 0.0);
  }
}

TEST(MonteCarlo, MatchesFullEnumerationOnFourFirms) {
  auto world = world_k(4, 3, 1.0);
  world.cost.c0 = 0.05;
  world.link_cost = 0.01;
  auto profiles = symmetric_profiles(4, 0.6, 0.5);
  profiles[1].q = 0.8;
  profiles[3].p = 0.3;
  const auto exact = oracle::exact_expected_payoffs(world, profiles);
  McOptions opt;
  opt.reps = 40000;
  opt.seed = 2;
  const auto est = expected_payoffs(world, profiles, opt);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_NEAR(est.net[i].mean, exact[i], 3.0 * est.net[i].se) << i;

  world.delta = 0.5;
  const auto exact_half = oracle::exact_expected_payoffs(world, profiles);
  const auto est_half = expected_payoffs(world, profiles, opt);
  for (std::size_t i = 0; i < 4; ++i)
    EXPECT_NEAR(est_half.net[i].mean, exact_half[i], 3.0 * est_half.net[i].se) << i;
}

TEST(Model, CostFamiliesSatisfyInvariants) {
  for (auto fam : registered_cost_families()) {
    CostSpec c{fam, 1.0};
    EXPECT_TRUE(cost_invariants_hold(c)) << to_string(fam);
  }
}

TEST(Model, ValidationRejectsBadInput) {
  auto world = world_k(10, 1);
  EXPECT_THROW(world.validate(), InvalidInput);
  world = world_k(10, 3, 1.5);
  EXPECT_THROW(world.validate(), InvalidInput);
  auto profiles = symmetric_profiles(10, 1.2, 0.5);
  EXPECT_THROW(validate_profiles(world_k(10, 3), profiles), InvalidInput);
}

TEST(Giant, AttachedFirmsLearnGiantShare) {
  WorldConfig w;
  w.n = 2000;
  w.k = 3;
  w.delta = 1.0;
  McOptions mc;
  mc.reps = 100;
  mc.seed = 1;
  const auto g = giant_learning(w, symmetric_profiles(w.n, 0.9, std::sqrt(2.0 / 2000.0)), mc);
  const double pred = giant_prediction(w.n, 0.9, std::sqrt(2.0 / 2000.0), 1.0).predicted_learned;
  EXPECT_NEAR(g.learned.mean / pred, 1.0, 0.06);
  EXPECT_NEAR(g.attached_share.mean, giant_share(2.0), 0.03);
}

TEST(Giant, NoIndirectArcsMeansSingletonCore) {
  WorldConfig w;
  w.n = 50;
  w.k = 3;
  w.delta = 0.0;
  McOptions mc;
  mc.reps = 5;
  const auto g = giant_learning(w, symmetric_profiles(w.n, 0.9, 0.3), mc);
  EXPECT_DOUBLE_EQ(g.core_share.mean, 1.0 / 50.0);
  EXPECT_DOUBLE_EQ(g.attached_share.mean, 1.0 / 50.0);
}
