#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "innonet/innonet.hpp"

using namespace innonet;

TEST(Spectral, ZeroOpennessGivesZero) {
  EXPECT_EQ(spectral_radius(symmetric_profiles(10, 0.5, 0.0), 1.0), 0.0);
}

TEST(Spectral, SymmetricClosedForm) {
  for (std::size_t n : {2u, 10u, 500u}) {
    for (double q : {0.01, 0.2, 0.7}) {
      const double delta = 0.6;
      const double expect = delta * q * q * static_cast<double>(n - 1);
      EXPECT_NEAR(spectral_radius(symmetric_profiles(n, 0.5, q), delta), expect, 1e-10 * expect)
          << n << " " << q;
    }
  }
}

TEST(Spectral, TwoFirms) {
  auto pr = symmetric_profiles(2, 0.5, 0.3);
  pr[1].q = 0.6;
  EXPECT_NEAR(spectral_radius(pr, 1.0), 0.18, 1e-12);
}

TEST(Spectral, MatchesDenseIterationOnMixedProfiles) {
  Rng rng(3);
  const std::size_t n = 60;
  std::vector<FirmProfile> pr(n);
  for (std::size_t i = 0; i < n; ++i) {
    pr[i].q = rng.uniform() * 0.3;
    pr[i].beta = 0.5 + 0.5 * rng.uniform();
    pr[i].is_public = i % 7 == 0;
    if (i % 3 == 0) {
      pr[i].q_public = rng.uniform() * 0.3;
      pr[i].q_private = rng.uniform() * 0.3;
    }
  }
  const IndirectLinkMatrix m(pr, 0.8);
  // Dense reference with its own power iteration.
  std::vector<double> x(n, 1.0), y(n);
  double lam = 0.0;
  for (int it = 0; it < 5000; ++it) {
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = x[i];  // shift by I
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += 0.8 * arc_probability(pr[i], pr[j]) * x[j];
      y[i] = s;
      norm = std::max(norm, s);
    }
    lam = norm - 1.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      ASSERT_DOUBLE_EQ(m.entry(i, j), 0.8 * arc_probability(pr[i], pr[j]));
    }
  }
  EXPECT_NEAR(spectral_radius(pr, 0.8), lam, 1e-9 * lam);
}

TEST(Spectral, ReducibleMatrixConverges) {
  auto pr = symmetric_profiles(20, 0.5, 0.3);
  for (std::size_t i = 0; i < 10; ++i) pr[i].q = 0.0;
  const auto r = spectral_radius_solve(pr, 1.0);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.lambda, 0.09 * 9, 1e-9);
}

TEST(Spectral, ClassificationAndRowSums) {
  const auto rep = criticality(symmetric_profiles(101, 0.5, 0.1), 1.0);
  EXPECT_EQ(rep.classification, Criticality::critical);
  EXPECT_NEAR(rep.row_sums[5], 1.0, 1e-12);
  EXPECT_EQ(classify(0.5), Criticality::subcritical);
  EXPECT_EQ(classify(1.5), Criticality::supercritical);
}

TEST(Branching, GiantShareValues) {
  EXPECT_EQ(giant_share(0.0), 0.0);
  EXPECT_EQ(giant_share(1.0), 0.0);
  EXPECT_NEAR(giant_share(2.0), 0.796812, 1e-6);
  EXPECT_NEAR(giant_share(10.0), 0.9999546, 1e-6);
  EXPECT_GT(giant_share(1.01), 0.015);
  const double a = giant_share(2.0);
  EXPECT_NEAR(a, 1.0 - std::exp(-2.0 * a), 1e-10);
  double prev = 0.0;
  for (double c = 1.05; c < 8.0; c += 0.05) {
    const double v = giant_share(c);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Branching, BorelPmf) {
  EXPECT_NEAR(borel_total_progeny_pmf(0.5, 1), 0.606531, 1e-6);
  EXPECT_NEAR(borel_total_progeny_pmf(0.5, 2), 0.183940, 1e-6);
  EXPECT_NEAR(borel_mass(0.5, 10000), 1.0, 1e-8);
  for (double c : {1.5, 2.0}) EXPECT_NEAR(borel_mass(c, 10000), 1.0 - giant_share(c), 1e-6) << c;
  EXPECT_TRUE(std::isfinite(borel_total_progeny_pmf(3.0, 100000)));
}

TEST(Asymptotics, SupercriticalPayoff) {
  const CostSpec cost{};
  EXPECT_DOUBLE_EQ(supercritical_payoff(100, 3, 1.0, 0.5, 0.1, 0.0, cost).value, -cost.value(0.5));
  const auto d = supercritical_payoff(100, 3, 1.0, 0.5, 0.1, 0.01, cost);
  EXPECT_TRUE(d.degenerate);
  EXPECT_EQ(d.gross, 0.0);
  // delta = 1 competition factor is (1 - iota)^(n-1) whatever alpha is.
  const auto a = supercritical_payoff(500, 3, 1.0, 0.5, 0.1, 0.4, cost);
  const double expect = std::pow(0.5, 3) * 0.4 * binom_real(200, 2) * std::pow(0.99, 499);
  EXPECT_NEAR(a.gross, expect, 1e-9 * expect);
  // Increasing in alpha, decreasing in iota.
  const double h = 1e-4;
  EXPECT_GT(supercritical_payoff(500, 3, 0.5, 0.5, 0.1, 0.5 + h, cost).gross,
            supercritical_payoff(500, 3, 0.5, 0.5, 0.1, 0.5, cost).gross);
  EXPECT_LT(supercritical_payoff(500, 3, 0.5, 0.5, 0.1 + h, 0.5, cost).gross,
            supercritical_payoff(500, 3, 0.5, 0.5, 0.1, 0.5, cost).gross);
}

TEST(Asymptotics, DirectEquilibriumRate) {
  EXPECT_NEAR(direct_eq_rate(10001, 2), 1e-2, 1e-15);
  EXPECT_NEAR(direct_eq_rate(2000, 3), std::cbrt(2.0 / 1999.0), 1e-15);
  EXPECT_NEAR(direct_eq_rate(2000, 3), 0.1000, 1e-3);
  EXPECT_NEAR(direct_eq_rate(1'000'001, 2) * std::sqrt(1e6), 1.0, 1e-12);
}

TEST(Asymptotics, PatentOptimum) {
  EXPECT_NEAR(optimal_patent_share(2), 1.0 / 3.0, 1e-3);
  EXPECT_NEAR(optimal_patent_share(3), 1.0 / 9.0, 1e-3);
  EXPECT_EQ(optimal_patent_share(4), 0.0);
  EXPECT_EQ(optimal_patent_share(10), 0.0);
  const double h = 1e-6;
  for (std::size_t k : {2u, 3u})
    EXPECT_GT(patent_profit_curve(h, k) - patent_profit_curve(0, k), 0.0);
  for (std::size_t k : {4u, 5u, 10u})
    EXPECT_LE(patent_profit_curve(h, k) - patent_profit_curve(0, k), 0.0);
}

TEST(Asymptotics, BudgetPhase) {
  for (double delta : {0.2, 1.0}) {
    EXPECT_EQ(budget_phase(0.3 * delta, delta), Criticality::subcritical);
    EXPECT_EQ(budget_phase(0.5 * delta, delta), Criticality::critical);
    EXPECT_EQ(budget_phase(0.7 * delta, delta), Criticality::supercritical);
  }
  EXPECT_THROW(budget_phase(0.0, 1.0), InvalidInput);
}

TEST(Investment, FocRoots) {
  const CostSpec cost{CostFamily::inverse, 1.0};
  EXPECT_TRUE(solve_investment_foc(2, 0.0, cost).corner);
  const auto r = solve_investment_foc(2, 8.0, cost);
  EXPECT_FALSE(r.corner);
  EXPECT_NEAR(r.p, (15.0 - std::sqrt(33.0)) / 16.0, 1e-12);
  EXPECT_LT(std::abs(r.residual), 1e-10);
  // Scales with c0.
  const CostSpec cost3{CostFamily::inverse, 3.0};
  EXPECT_NEAR(solve_investment_foc(2, 24.0, cost3).p, r.p, 1e-12);
  for (auto fam : registered_cost_families())
    for (std::size_t k : {2u, 3u, 5u})
      for (double e : {0.5, 10.0, 1e4}) {
        const auto s = solve_investment_foc(k, e, CostSpec{fam, 1.0});
        if (s.corner) continue;
        // Absolute residuals are limited by c'(p) ~ 1e8 near p = 1 when E is huge.
        const double scale = std::max(1.0, std::pow(s.p, k - 1.0) * e);
        EXPECT_LT(std::abs(s.residual), 1e-10 * scale) << k << " " << e << " p " << s.p;
      }
  // Below the slope threshold at 0 with k = 2 there is no interior root.
  EXPECT_TRUE(solve_investment_foc(2, 1.0, cost).corner);
}

TEST(CrossCheck, SupercriticalSimulationMatchesFormula) {
  const std::size_t n = 2000, k = 3;
  const double p = 0.9, q = std::sqrt(2.0 / n);
  WorldConfig world;
  world.n = n;
  world.k = k;
  world.delta = 1.0;
  const auto profiles = symmetric_profiles(n, p, q);
  McOptions opt;
  opt.reps = 60;
  opt.seed = 17;
  const auto est = expected_payoffs(world, profiles, opt);
  const auto pred = supercritical_payoff(n, k, 1.0, p, q, giant_share(2.0), world.cost);
  EXPECT_NEAR(est.firm_average.mean, pred.value, 3.0 * est.firm_average.se)
      << "se " << est.firm_average.se;
}
