#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "innonet/innonet.hpp"

using namespace innonet;

namespace {

WorldConfig world(std::size_t n, std::size_t k, double delta) {
  WorldConfig w;
  w.n = n;
  w.k = k;
  w.delta = delta;
  return w;
}

double rate_for(double lambda, std::size_t n, double delta = 1.0) {
  return std::sqrt(lambda / (delta * static_cast<double>(n - 1)));
}

/// Mean simulated net payoff over the firms matching `pick`.
template <class Pick>
double group_mean(const PayoffEstimate& est, const std::vector<FirmProfile>& pr, Pick pick) {
  double s = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < pr.size(); ++i)
    if (pick(pr[i])) {
      s += est.net[i].mean;
      ++c;
    }
  return c ? s / static_cast<double>(c) : 0.0;
}

}  // namespace

TEST(Fit, RecoversPeakOfSmoothObjective) {
  std::vector<double> x, u;
  for (int i = 0; i < 25; ++i) {
    x.push_back(0.01 * std::exp(0.15 * i));
    const double d = std::log(x.back() / 0.07);
    u.push_back(10.0 - d * d + 0.1 * d * d * d);
  }
  const auto peak = detail::fitted_peak(x, u, 4);
  ASSERT_TRUE(peak.has_value());
  EXPECT_NEAR(*peak / 0.07, 1.0, 0.01);
}

TEST(Fit, MonotoneObjectivePeaksAtEdge) {
  std::vector<double> x, u;
  for (int i = 0; i < 10; ++i) {
    x.push_back(1.0 + i);
    u.push_back(i);
  }
  EXPECT_DOUBLE_EQ(*detail::fitted_peak(x, u, 4), 10.0);
}

TEST(Deviation, MatchesSimulatorAtSymmetricProfile) {
  auto w = world(40, 3, 0.6);
  const auto pr = symmetric_profiles(w.n, 0.7, 0.25);
  const DeviationModel model(w, pr, 3, 3000, 9, 1, {});
  const auto dev = model.value(Rates::uniform(0.25), 0.7);
  McOptions mc;
  mc.reps = 3000;
  mc.seed = 4;
  const auto est = expected_payoffs(w, pr, mc);
  const auto& sim = est.net[3];
  EXPECT_NEAR(dev.payoff.mean, sim.mean,
              3.0 * std::sqrt(dev.payoff.se * dev.payoff.se + sim.se * sim.se));
}

TEST(Deviation, CommonSamplesAreReproducible) {
  auto w = world(200, 3, 1.0);
  const auto pr = symmetric_profiles(w.n, 0.8, rate_for(1.0, w.n));
  const DeviationModel a(w, pr, 0, 100, 5, 1, {});
  const DeviationModel b(w, pr, 0, 100, 5, 2, {});
  const Rates x = Rates::uniform(0.05);
  EXPECT_EQ(a.value(x, 0.8).payoff.mean, b.value(x, 0.8).payoff.mean);
  EXPECT_EQ(a.value(x, 0.8).marginal, b.value(x, 0.8).marginal);
}

TEST(BestResponse, SubcriticalOpponentsPushOpennessUp) {
  auto w = world(1000, 3, 1.0);
  const double q = rate_for(0.5, w.n);
  SolverConfig cfg;
  cfg.reps = 500;
  const DeviationModel model(w, symmetric_profiles(w.n, 0.9, q), 0, cfg.reps, 11, 1, cfg.counting);
  const auto br = best_response_q(model, Rates::uniform(q), 0.9, cfg);
  EXPECT_FALSE(br.indifferent);
  EXPECT_GT(br.x.to_private, q);
}

TEST(BestResponse, SupercriticalOpponentsPullOpennessDown) {
  auto w = world(1000, 3, 1.0);
  const double q = rate_for(3.0, w.n);
  SolverConfig cfg;
  cfg.reps = 500;
  const DeviationModel model(w, symmetric_profiles(w.n, 0.9, q), 0, cfg.reps, 11, 1, cfg.counting);
  const auto br = best_response_q(model, Rates::uniform(q), 0.9, cfg);
  EXPECT_LT(br.x.to_private, q);
}

TEST(BestResponse, IndifferentWhenNobodyElseIsOpen) {
  auto w = world(50, 3, 1.0);
  auto pr = symmetric_profiles(w.n, 0.9, 0.0);
  pr[0].q = 0.1;
  SolverConfig cfg;
  cfg.reps = 50;
  const DeviationModel model(w, pr, 0, cfg.reps, 1, 1, cfg.counting);
  const auto br = best_response_q(model, Rates::uniform(0.1), 0.9, cfg);
  EXPECT_TRUE(br.indifferent);
  EXPECT_EQ(br.x.to_private, 0.1);
}

TEST(BestResponse, InvestmentSolvesFirstOrderCondition) {
  const CostSpec cost;
  EXPECT_EQ(best_response_p(0.0, cost), 0.0);
  EXPECT_EQ(investment_update(-1.0, 0.5, 3, cost), 0.0);
  for (double m : {5.0, 50.0, 500.0}) {
    const double p = best_response_p(m, cost);
    ASSERT_GT(p, 0.0) << m;
    EXPECT_NEAR(cost.derivative(p) / m, 1.0, 1e-8) << m;
  }
  // Fixed points of the update are best responses.
  const double p = 0.8, e = cost.derivative(p) / (p * p);
  EXPECT_NEAR(investment_update(e * p * p, p, 3, cost), p, 1e-8);
}

TEST(BestResponse, BudgetGridStaysOnBudgetLine) {
  auto w = world(300, 3, 1.0);
  const auto f = budget_profile(0.001, 0.5, w.n);
  const auto g = q_grid(w, f, 0.001, SolverConfig{});
  EXPECT_LE(g.back(), 1.0 / (0.5 * 300.0));
  for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(Symmetric, ZeroInvestmentSeedIsTrivial) {
  SolverConfig cfg;
  cfg.reps = 50;
  cfg.p_init = 0.0;
  const auto r = symmetric_equilibrium(world(100, 3, 1.0), cfg);
  EXPECT_FALSE(r.investment);
  EXPECT_EQ(r.status, "trivial: no investment");
  EXPECT_EQ(r.p_star, 0.0);
}

TEST(Symmetric, CriticalAt500WithCertificateAndTau) {
  SolverConfig cfg;
  const auto r = symmetric_equilibrium(world(500, 3, 1.0), cfg);
  EXPECT_TRUE(r.investment);
  EXPECT_TRUE(r.converged) << r.trace_log();
  EXPECT_GE(r.lambda_hat, 0.5);
  EXPECT_LE(r.lambda_hat, 2.0);
  ASSERT_EQ(r.groups.size(), 1u);
  EXPECT_GE(r.groups[0].certificate_gap, 0.0);
  EXPECT_LE(r.groups[0].certificate_gap, cfg.certificate_tolerance);
  if (r.lambda_hat <= 1.2) {
    EXPECT_LE(std::abs(r.lambda_hat - r.tau_mean), 0.3);
  }
}

TEST(Symmetric, OpennessScalesLikeInverseRootN) {
  SolverConfig cfg;
  const auto small = symmetric_equilibrium(world(250, 3, 1.0), cfg);
  const auto large = symmetric_equilibrium(world(1000, 3, 1.0), cfg);
  const double ratio = small.q_star / large.q_star;
  EXPECT_GE(ratio, 1.6);
  EXPECT_LE(ratio, 2.4);
}

TEST(Symmetric, DirectLearningScale) {
  SolverConfig cfg;
  cfg.reps = 400;
  const auto small = symmetric_equilibrium(world(500, 2, 0.0), cfg);
  const auto large = symmetric_equilibrium(world(2000, 2, 0.0), cfg);
  const double iota = large.q_star * large.q_star;
  EXPECT_NEAR(iota * std::sqrt(2000.0), 1.0, 0.2);
  // iota ~ n^(-1/k): quadrupling n halves it for k = 2.
  const double ratio = small.q_star * small.q_star / iota;
  EXPECT_GE(ratio, 1.6);
  EXPECT_LE(ratio, 2.4);
}

TEST(Tau, ForcedCriticalProfileApproachesOne) {
  McOptions opt;
  opt.reps = 40;
  opt.seed = 3;
  std::vector<std::size_t> firms(200);
  for (std::size_t i = 0; i < firms.size(); ++i) firms[i] = i;
  auto tau_at = [&](std::size_t n) {
    auto w = world(n, 3, 1.0);
    return pooled_tau(w, symmetric_profiles(n, 0.9, rate_for(1.0, n)), opt, 100, firms).mean;
  };
  const double t500 = tau_at(500), t2000 = tau_at(2000);
  EXPECT_LT(t2000, t500);
  EXPECT_LE(t2000, 1.3);
  EXPECT_GE(t2000, 1.0);
}

TEST(Variant, BudgetIdentityHolds) {
  VariantSpec v;
  v.kind = VariantSpec::Kind::budget;
  v.budget_lambda = 0.5;
  SolverConfig cfg;
  cfg.reps = 300;
  const auto r = variant_equilibrium(world(300, 3, 1.0), v, cfg);
  ASSERT_EQ(r.profiles.size(), 300u);
  for (const auto& f : r.profiles) {
    EXPECT_TRUE(f.budget_mode);
    EXPECT_NEAR(f.p, 1.0 - 0.5 * f.q * 300.0, 1e-12);
  }
  EXPECT_EQ(r.variant, "budget");
}

TEST(Variant, PatentsWithoutIndirectLearningHaveNoInvestmentEquilibrium) {
  auto w = world(300, 2, 0.0);
  w.link_cost = 0.01;
  VariantSpec v;
  v.kind = VariantSpec::Kind::patents;
  SolverConfig cfg;
  cfg.reps = 300;
  const auto r = variant_equilibrium(w, v, cfg);
  EXPECT_FALSE(r.investment);
  EXPECT_EQ(r.status, "no investment equilibrium");
}

TEST(Variant, DirectedPublicKeepsPrivatePayoffsLarge) {
  VariantSpec v;
  v.kind = VariantSpec::Kind::directed;
  v.share = 0.5;
  SolverConfig cfg;
  cfg.reps = 500;
  const auto r = variant_equilibrium(world(250, 3, 1.0), v, cfg);
  ASSERT_EQ(r.groups.size(), 2u);
  EXPECT_TRUE(r.groups[0].directed);
  EXPECT_EQ(r.groups[1].q, 1.0);
  EXPECT_GE(r.groups[0].payoff.mean / binom_real(249.0, 2.0), 0.01);
}

TEST(Variant, PerIdeaPayoffsOfLargeFirmsNearDouble) {
  VariantSpec v;
  v.kind = VariantSpec::Kind::sigma;
  v.share = 0.5;
  SolverConfig cfg;
  auto w = world(1000, 3, 1.0);
  const auto r = variant_equilibrium(w, v, cfg);
  McOptions mc;
  mc.reps = 200;
  mc.seed = 5;
  const auto est = expected_payoffs(w, r.profiles, mc);
  const double u1 = group_mean(est, r.profiles, [](const FirmProfile& f) { return f.sigma == 1; });
  const double u2 = group_mean(est, r.profiles, [](const FirmProfile& f) { return f.sigma == 2; });
  ASSERT_GT(u1, 0.0);
  EXPECT_GE(u2 / u1, 1.5);
  EXPECT_LE(u2 / u1, 2.8);
}

TEST(Variant, BetaGroupsSortedByBeta) {
  VariantSpec v;
  v.kind = VariantSpec::Kind::beta;
  SolverConfig cfg;
  cfg.reps = 100;
  cfg.max_iterations = 2;
  cfg.certificate = false;
  cfg.tau_reps = 0;
  const auto r = variant_equilibrium(world(200, 3, 1.0), v, cfg);
  ASSERT_EQ(r.groups.size(), 4u);
  for (const auto& f : r.profiles) {
    EXPECT_GE(f.beta, 0.5);
    EXPECT_LT(f.beta, 1.0);
  }
}

TEST(Result, CsvRowMatchesHeader) {
  SolverConfig cfg;
  cfg.reps = 50;
  cfg.max_iterations = 2;
  const auto r = symmetric_equilibrium(world(100, 3, 1.0), cfg);
  auto fields = [](const std::string& s) { return std::count(s.begin(), s.end(), ',') + 1; };
  EXPECT_EQ(fields(r.csv_row()), fields(EquilibriumResult::kCsvHeader));
  EXPECT_EQ(r.csv_row().find('\n'), std::string::npos);
  EXPECT_NE(r.trace_log().find("group all"), std::string::npos);
}

TEST(Result, IndependentOfThreadCount) {
  SolverConfig cfg;
  cfg.reps = 100;
  cfg.max_iterations = 3;
  auto w = world(200, 3, 1.0);
  const auto a = symmetric_equilibrium(w, cfg);
  cfg.threads = 3;
  const auto b = symmetric_equilibrium(w, cfg);
  EXPECT_EQ(a.csv_row(), b.csv_row());
}

TEST(Intervention, UnitFactorIsExactlyOne) {
  auto w = world(150, 3, 1.0);
  EquilibriumResult eq;
  eq.profiles = symmetric_profiles(w.n, 0.9, rate_for(1.0, w.n));
  InterventionOptions opt;
  opt.reps = 100;
  const auto scan = intervention_scan(w, eq, {1.0, 1.25}, opt);
  ASSERT_FALSE(scan.guarded);
  EXPECT_EQ(scan.points[0].ratio, 1.0);
  EXPECT_EQ(scan.points[0].dp_ratio, 1.0);
  EXPECT_GT(scan.points[1].ratio, 1.0);
}

TEST(Intervention, GuardsNonPositiveBaseline) {
  auto w = world(60, 3, 1.0);
  EquilibriumResult eq;
  eq.profiles = symmetric_profiles(w.n, 0.0, 0.1);
  InterventionOptions opt;
  opt.reps = 20;
  const auto scan = intervention_scan(w, eq, {1.25}, opt);
  EXPECT_TRUE(scan.guarded);
  EXPECT_TRUE(std::isnan(scan.points[0].ratio));
}

TEST(Intervention, RejectsBudgetProfiles) {
  std::vector<FirmProfile> pr(5, budget_profile(0.01, 0.5, 5));
  EXPECT_THROW(scaled_profiles(pr, 1.25), InvalidInput);
}
