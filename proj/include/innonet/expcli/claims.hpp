#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "innonet/analytics/branching.hpp"
#include "innonet/analytics/spectral.hpp"
#include "innonet/core/combinatorics.hpp"
#include "innonet/core/rng.hpp"
#include "innonet/expcli/experiments.hpp"
#include "innonet/oracle/brute_force.hpp"
#include "innonet/sim/payoff.hpp"

namespace innonet {

struct ClaimVerdict {
  bool pass = true;
  std::vector<std::string> lines;
  /// Tables computed by the check itself rather than by a manifest run.
  std::map<std::string, CsvTable> tables;

  /// Records one condition; the verdict fails if any condition fails.
  void expect(bool ok, const std::string& line) {
    pass = pass && ok;
    lines.push_back((ok ? "ok   " : "FAIL ") + line);
  }
  void note(const std::string& line) { lines.push_back("     " + line); }
};

/// Runs canonical manifests for claim checks, memoizing each run.
class ClaimContext {
 public:
  ClaimContext(std::filesystem::path manifest_dir, unsigned threads,
               std::filesystem::path out_dir = {})
      : manifest_dir_(std::move(manifest_dir)), out_dir_(std::move(out_dir)), threads_(threads) {}

  const std::filesystem::path& manifest_dir() const { return manifest_dir_; }

  ExperimentManifest manifest(const std::string& name) const {
    return load_manifest(manifest_dir_ / name);
  }

  const RunResult& run(const std::string& name) {
    auto it = runs_.find(name);
    if (it != runs_.end()) return it->second;
    auto res = run_manifest(manifest(name), options(threads_));
    if (!out_dir_.empty()) write_outputs(res, out_dir_);
    return runs_.emplace(name, std::move(res)).first->second;
  }

  const CsvTable& table(const std::string& name) {
    const auto& r = run(name);
    return r.files.at(r.main_file);
  }

  /// Uncached run with an explicit thread count.
  RunResult run_fresh(const std::string& name, unsigned threads) {
    return run_manifest(manifest(name), options(threads));
  }

  /// Writes a check-computed table to the output directory.
  void write(const std::string& name, const CsvTable& t) {
    if (out_dir_.empty()) return;
    RunResult r;
    r.main_file = name;
    r.files[name] = t;
    write_outputs(r, out_dir_);
  }

 private:
  RunOptions options(unsigned threads) {
    RunOptions o;
    o.threads = threads;
    o.base_dir = manifest_dir_;
    o.cache = &cache_;
    return o;
  }

  std::filesystem::path manifest_dir_;
  std::filesystem::path out_dir_;
  unsigned threads_;
  EquilibriumCache cache_;
  std::map<std::string, RunResult> runs_;
};

struct Claim {
  std::string id;
  std::string summary;
  /// Canonical manifests (file names under the manifest directory).
  std::vector<std::string> manifests;
  std::function<ClaimVerdict(ClaimContext&)> check;
};

namespace claims {

inline std::string num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline ClaimVerdict example_2_2(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& one = ctx.table("replay-figure1.manifest");
  const auto& two = ctx.table("replay-figure2.manifest");
  const std::vector<double> gross{0, 0, 1, 0};
  bool match = one.rows.size() == 4;
  for (std::size_t i = 0; match && i < 4; ++i) match = one.value(i, "gross") == gross[i];
  v.expect(match, "figure 1 gross payoffs (0,0,1,0)");
  std::string row;
  if (one.rows.size() > 2)
    for (const auto& cell : one.rows[2]) row += (row.empty() ? "" : ",") + cell;
  v.expect(row.rfind("2,1,0,0,1,", 0) == 0, "figure 1 firm id 2 row: " + row);
  bool zeros = !two.rows.empty();
  for (std::size_t i = 0; i < two.rows.size(); ++i) zeros = zeros && two.value(i, "gross") == 0.0;
  v.expect(zeros, "figure 2 gross payoffs all zero");

  // Proprietary technologies of firm id 2, listed literally.
  const auto m = ctx.manifest("replay-figure1.manifest");
  const auto net = load_replay(detail::resolve(ctx.manifest_dir(), m.at("replay.file")));
  const auto know = oracle::naive_knowledge(net);
  std::vector<std::size_t> disc;
  for (std::size_t x = 0; x < net.idea_count(); ++x)
    if (net.discovered.test(x)) disc.push_back(x);
  std::vector<std::vector<std::size_t>> pt;
  const std::size_t firm = 2;
  for (std::size_t a = 0; a < disc.size(); ++a)
    for (std::size_t b = a + 1; b < disc.size(); ++b)
      for (std::size_t c = b + 1; c < disc.size(); ++c) {
        const std::vector<std::size_t> t{disc[a], disc[b], disc[c]};
        auto knows = [&](std::size_t i) {
          return std::all_of(t.begin(), t.end(), [&](std::size_t x) { return know[i][x] != 0; });
        };
        const bool own = std::any_of(t.begin(), t.end(),
                                     [&](std::size_t x) { return net.idea_owner[x] == firm; });
        bool rival = false;
        for (std::size_t i = 0; i < net.n; ++i) rival = rival || (i != firm && knows(i));
        if (own && knows(firm) && !rival) pt.push_back(t);
      }
  std::string listed;
  for (const auto& t : pt) {
    listed += "{";
    for (std::size_t j = 0; j < t.size(); ++j) listed += (j ? "," : "") + std::to_string(t[j] + 1);
    listed += "}";
  }
  v.expect(pt == std::vector<std::vector<std::size_t>>{{0, 2, 3}},
           "proprietary technologies of the third firm (1-based ideas): {" + listed + "}");
  return v;
}

inline ClaimVerdict table1(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("table1.manifest");
  const auto sub = t.find_row("c", 0.5), crit = t.find_row("c", 1.0), sup = t.find_row("c", 3.0);
  const double n = t.value(sub, "n"), k = t.value(sub, "k");
  const double scale = binom_double(static_cast<std::uint64_t>(n - 1), static_cast<std::uint64_t>(k - 1));
  v.note("region          lambda  BR q/q   payoff   payoff/C(n-1,k-1)");
  for (auto [name, r] : {std::pair{"subcritical  ", sub}, {"critical     ", crit},
                         {"supercritical", sup}}) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s   %6.3f  %6.3f  %8.4g  %.3g", name, t.value(r, "lambda"),
                  t.value(r, "br_ratio"), t.value(r, "payoff_at_q"),
                  t.value(r, "payoff_at_q") / scale);
    v.note(buf);
  }
  v.expect(t.value(sub, "br_ratio") > 1.0, "subcritical best response is higher than q");
  v.expect(t.value(sup, "br_ratio") < 1.0, "supercritical best response is lower than q");
  v.expect(t.value(sub, "br_ratio") > t.value(crit, "br_ratio") &&
               t.value(crit, "br_ratio") > t.value(sup, "br_ratio"),
           "best response ratio falls from subcritical to critical to supercritical");
  v.expect(t.value(sub, "payoff_at_q") < t.value(crit, "payoff_at_q") &&
               t.value(crit, "payoff_at_q") < t.value(sup, "payoff_at_q"),
           "average payoff rises from subcritical to critical to supercritical");
  v.expect(t.value(sup, "payoff_at_q") > 10.0 * t.value(sub, "payoff_at_q"),
           "supercritical payoff exceeds ten times the subcritical payoff");
  return v;
}

inline ClaimVerdict patent_share(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& curve = ctx.table("patent-share.manifest");
  const auto& best = ctx.run("patent-share.manifest").files.at("patent_share_argmax.csv");
  for (std::size_t k : {2, 3, 5, 10}) {
    std::vector<std::pair<double, double>> pts;
    for (std::size_t r = 0; r < curve.rows.size(); ++r)
      if (curve.value(r, "k") == static_cast<double>(k))
        pts.emplace_back(curve.value(r, "b"), curve.value(r, "profit"));
    std::sort(pts.begin(), pts.end());
    const double b_star = best.value(best.find_row("k", static_cast<double>(k)), "b_star");
    // Rising up to the grid peak, falling after it; the peak sits next to b_star.
    bool shape = pts.size() > 2 && pts.front().first == 0.0 && pts.back().first == 1.0;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i].second > pts[peak].second) peak = i;
    for (std::size_t i = 1; shape && i < pts.size(); ++i)
      shape = i <= peak ? pts[i].second >= pts[i - 1].second : pts[i].second <= pts[i - 1].second;
    const double step = pts.size() > 1 ? pts[1].first - pts[0].first : 1.0;
    shape = shape && std::abs(pts[peak].first - b_star) <= step;
    const double at0 = 0.25 * std::pow(0.5, static_cast<double>(k - 1));
    v.expect(shape && std::abs(pts.front().second - at0) < 1e-12 && pts.back().second == 0.0,
             "k=" + std::to_string(k) + ": single peak at b=" + num(b_star) +
                 ", starts at 0.25*2^-(k-1), ends at 0");
  }
  const auto b = [&](double k) { return best.value(best.find_row("k", k), "b_star"); };
  v.expect(b(2) > b(3) && b(3) > 0.0 && b(5) == 0.0 && b(10) == 0.0,
           "optimal patent share falls with k and is 0 from k=5 on");
  return v;
}

inline ClaimVerdict criticality(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("criticality.manifest");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double l = t.value(r, "lambda_hat");
    v.expect(l >= 0.5 && l <= 2.0, "n=" + t.rows[r][t.column("n")] + ": lambda_hat " + num(l) +
                                       " in [0.5, 2.0]");
  }
  const double l250 = t.value(t.find_row("n", 250), "lambda_hat");
  const double l1000 = t.value(t.find_row("n", 1000), "lambda_hat");
  v.expect(std::abs(l1000 - 1.0) <= std::abs(l250 - 1.0) + 0.1,
           "|lambda-1| at n=1000 (" + num(std::abs(l1000 - 1.0)) + ") <= at n=250 (" +
               num(std::abs(l250 - 1.0)) + ") + 0.1");
  return v;
}

inline ClaimVerdict direct_learning(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("direct-learning.manifest");
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double n = t.value(r, "n"), k = t.value(r, "k"), q = t.value(r, "q_star");
    const double scaled = q * q * std::pow(n, 1.0 / k);
    const double target = std::pow(k - 1.0, 1.0 / k);
    v.expect(std::abs(scaled / target - 1.0) <= 0.2,
             "k=" + num(k) + ": iota*n^(1/k) = " + num(scaled) + " vs " + num(target) + " +-20%");
  }
  return v;
}

inline ClaimVerdict giant_component(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("giant-component.manifest");
  const auto r = t.find_row("c", 2.0);
  const double learned = t.value(r, "learned_mean"), pred = t.value(r, "learned_pred");
  v.expect(std::abs(learned / pred - 1.0) <= 0.06,
           "c=2: mean learned " + num(learned, 6) + " vs 0.7968*p*n = " + num(pred, 6) + " +-6%");
  for (double c : {0.5, 1.0, 2.0}) {
    const auto row = t.find_row("c", c);
    v.note("c=" + num(c) + ": giant share " + num(t.value(row, "giant_share")) + ", predicted " +
           num(t.value(row, "giant_share_pred")));
  }
  return v;
}

inline ClaimVerdict openness_payoff(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("intervention.manifest");
  auto ratio = [&](double n) {
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      if (t.value(r, "n") == n && t.value(r, "factor") == 1.25) return t.value(r, "ratio");
    throw InvalidInput("intervention table lacks n=" + num(n) + " factor 1.25");
  };
  const double r500 = ratio(500), r1000 = ratio(1000);
  v.expect(r1000 >= 3.0, "n=1000: U(p*,1.25q*)/U(p*,q*) = " + num(r1000) + " >= 3");
  v.expect(r1000 > r500, "ratio at n=1000 (" + num(r1000) + ") exceeds ratio at n=500 (" +
                             num(r500) + ")");
  return v;
}

inline ClaimVerdict investment_sensitivity(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("intervention.manifest");
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    if (t.value(r, "n") == 1000 && t.value(r, "factor") == 1.25) {
      const double d = t.value(r, "dp_ratio");
      v.expect(d >= 2.0, "n=1000: p-sensitivity ratio at 1.25q* = " + num(d) + " >= 2");
      return v;
    }
  v.expect(false, "intervention table lacks n=1000 factor 1.25");
  return v;
}

inline ClaimVerdict patent_optimum(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& best = ctx.run("patent-optimum.manifest").files.at("patent_optimum_argmax.csv");
  const std::map<double, double> want{{2, 1.0 / 3.0}, {3, 1.0 / 9.0}, {4, 0.0}, {10, 0.0}};
  for (const auto& [k, b] : want) {
    const double got = best.value(best.find_row("k", k), "b_star");
    v.expect(std::abs(got - b) <= 1e-3, "k=" + num(k) + ": argmax " + num(got, 6) + " vs " +
                                            num(b, 6) + " +-0.001");
  }
  return v;
}

inline ClaimVerdict competition(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("competition.manifest");
  const auto pos = t.find_row("f", 0.5), neg = t.find_row("f", -0.5);
  v.expect(t.value(pos, "lambda_hat") > 1.2,
           "f(m)=0.5: lambda_hat " + num(t.value(pos, "lambda_hat")) + " > 1.2");
  v.expect(t.value(neg, "lambda_hat") < 0.8,
           "f(m)=-0.5: lambda_hat " + num(t.value(neg, "lambda_hat")) + " < 0.8");
  return v;
}

inline ClaimVerdict budget(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("budget.manifest");
  const auto lo = t.find_row("lambda_b", 0.3), hi = t.find_row("lambda_b", 0.7);
  v.expect(t.value(lo, "lambda_hat") < 0.8,
           "lambda_b=0.3: lambda_hat " + num(t.value(lo, "lambda_hat")) + " < 0.8");
  v.expect(t.value(hi, "lambda_hat") > 1.2,
           "lambda_b=0.7: lambda_hat " + num(t.value(hi, "lambda_hat")) + " > 1.2");
  return v;
}

inline ClaimVerdict heterogeneous_beta(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("heterogeneous-beta.manifest");
  const double l500 = t.value(t.find_row("n", 500), "lambda_hat");
  const double l1000 = t.value(t.find_row("n", 1000), "lambda_hat");
  v.expect(l500 >= 0.5 && l500 <= 2.0, "n=500: index " + num(l500) + " in [0.5, 2.0]");
  v.expect(l1000 >= 0.5 && l1000 <= 2.0, "n=1000: index " + num(l1000) + " in [0.5, 2.0]");
  v.expect(std::abs(l1000 - 1.0) <= std::abs(l500 - 1.0) + 0.1,
           "|index-1| at n=1000 (" + num(std::abs(l1000 - 1.0)) + ") <= at n=500 (" +
               num(std::abs(l500 - 1.0)) + ") + 0.1");
  return v;
}

inline ClaimVerdict public_innovators(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& t = ctx.table("public-innovators.manifest");
  auto scaled = [&](double n) {
    const auto r = t.find_row("n", n);
    const auto k = static_cast<std::uint64_t>(t.value(r, "k"));
    return t.value(r, "payoff_mean") / binom_double(static_cast<std::uint64_t>(n) - 1, k - 1);
  };
  const double s500 = scaled(500), s1000 = scaled(1000);
  v.expect(s500 >= 0.01, "n=500: private payoff / C(n-1,k-1) = " + num(s500) + " >= 0.01");
  v.expect(s1000 >= 0.01, "n=1000: private payoff / C(n-1,k-1) = " + num(s1000) + " >= 0.01");
  v.expect(s1000 >= 0.5 * s500, "n=1000 value is at least half the n=500 value");
  return v;
}

inline ClaimVerdict tau(ClaimContext& ctx) {
  ClaimVerdict v;
  const auto& eq = ctx.table("criticality.manifest");
  for (std::size_t r = 0; r < eq.rows.size(); ++r) {
    const double l = eq.value(r, "lambda_hat"), t = eq.value(r, "tau_mean");
    const std::string n = eq.rows[r][eq.column("n")];
    if (l > 1.2) {
      v.note("n=" + n + ": lambda_hat " + num(l) + " > 1.2, not checked");
      continue;
    }
    v.expect(std::abs(l - t) <= 0.3,
             "n=" + n + ": |lambda_hat - mean tau| = |" + num(l) + " - " + num(t) + "| <= 0.3");
  }
  const auto& forced = ctx.table("tau-forced.manifest");
  const auto r = forced.find_row("n", 2000);
  const double t = forced.value(r, "tau_mean");
  v.expect(t <= 1.3, "forced critical profile, n=2000: mean tau " + num(t) + " <= 1.3");
  return v;
}

inline ClaimVerdict oracles(ClaimContext& ctx) {
  ClaimVerdict v;
  Rng rng(2024);
  std::size_t instances = 0, compared = 0, mismatched = 0, skipped = 0;
  while (instances < 500) {
    const std::size_t n = 3 + rng.below(28);
    const std::size_t k = 2 + rng.below(3);
    const auto net = oracle::random_network(rng, n, 0.02 + rng.uniform() * 0.15, rng.uniform(), 0.8, 2);
    const auto ks = knowledge_closure(net);
    ++instances;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<i128> a;
      try {
        a = count_proprietary_ie(ks, net, i, k);
      } catch (const CompetitorCapExceeded&) {
        ++skipped;
        continue;
      }
      const auto b = count_proprietary_exact(ks, net, i, k);
      ++compared;
      if (a != b) ++mismatched;
    }
  }
  v.expect(mismatched == 0 && compared > 0,
           std::to_string(instances) + " random instances, " + std::to_string(compared) +
               " firm counts compared, " + std::to_string(mismatched) + " mismatches (" +
               std::to_string(skipped) + " over the competitor cap)");

  WorldConfig world;
  world.n = 4;
  world.k = 3;
  world.cost.c0 = 0.05;
  world.link_cost = 0.01;
  auto profiles = symmetric_profiles(4, 0.6, 0.5);
  profiles[1].q = 0.8;
  profiles[3].p = 0.3;
  McOptions opt;
  opt.reps = 40000;
  opt.seed = 2;
  CsvTable table;
  table.columns = {"firm", "exact", "mc_mean", "mc_se"};
  for (double delta : {1.0, 0.5}) {
    world.delta = delta;
    const auto exact = oracle::exact_expected_payoffs(world, profiles);
    const auto est = expected_payoffs(world, profiles, opt);
    bool within = true;
    for (std::size_t i = 0; i < 4; ++i) {
      within = within && std::abs(est.net[i].mean - exact[i]) <= 3.0 * est.net[i].se;
      table.rows.push_back({std::to_string(i), detail::fmt(exact[i]), detail::fmt(est.net[i].mean),
                            detail::fmt(est.net[i].se)});
    }
    v.expect(within, "four-firm world, delta=" + num(delta) +
                         ": Monte Carlo payoffs within 3 SE of full enumeration");
  }
  ctx.write("oracles.csv", table);
  v.tables["oracles.csv"] = table;
  return v;
}

inline ClaimVerdict numerics(ClaimContext& ctx) {
  ClaimVerdict v;
  double worst = 0.0;
  for (std::size_t n : {10, 100, 1000})
    for (double q : {0.01, 0.05, 0.2})
      for (double delta : {0.3, 1.0}) {
        if (q * q * delta * static_cast<double>(n - 1) > 50.0) continue;
        const double got = spectral_radius(symmetric_profiles(n, 0.5, q), delta);
        worst = std::max(worst, std::abs(got - delta * q * q * static_cast<double>(n - 1)));
      }
  v.expect(worst <= 1e-10, "symmetric spectral radius vs delta q^2 (n-1): max error " + num(worst));
  for (double c : {1.5, 2.0}) {
    const double err = std::abs(borel_mass(c, 10000) - (1.0 - giant_share(c)));
    v.expect(err <= 1e-6, "Borel mass at C'=" + num(c) + " vs 1 - alpha: error " + num(err));
  }
  const double a = giant_share(2.0);
  v.expect(std::abs(a - 0.796812) <= 1e-6, "giant_share(2) = " + num(a, 8));
  (void)ctx;
  return v;
}

inline ClaimVerdict determinism(ClaimContext& ctx) {
  ClaimVerdict v;
  for (const char* name : {"determinism-simulate.manifest", "determinism-equilibrium.manifest"}) {
    std::vector<std::string> texts;
    for (unsigned threads : {1u, 2u, 8u}) {
      const auto r = ctx.run_fresh(name, threads);
      std::string all;
      for (const auto& [file, table] : r.files) all += file + "\n" + table.text();
      texts.push_back(all);
    }
    v.expect(texts[0] == texts[1] && texts[0] == texts[2],
             std::string(name) + ": CSV byte-identical across 1/2/8 threads");
  }
  return v;
}

}  // namespace claims

/// Registered claims in acceptance order.
inline const std::vector<Claim>& claim_registry() {
  static const std::vector<Claim> r{
      {"example-2-2", "worked example: replayed realizations give the listed payoffs",
       {"replay-figure1.manifest", "replay-figure2.manifest"}, claims::example_2_2},
      {"criticality", "symmetric equilibrium is critical at n = 250, 500, 1000",
       {"criticality.manifest"}, claims::criticality},
      {"direct-learning", "without indirect learning iota n^(1/k) -> (k-1)^(1/k)",
       {"direct-learning.manifest"}, claims::direct_learning},
      {"giant-component", "firms attached to the giant set learn alpha p n ideas",
       {"giant-component.manifest"}, claims::giant_component},
      {"openness-payoff", "raising openness 25% above equilibrium multiplies payoffs",
       {"intervention.manifest"}, claims::openness_payoff},
      {"investment-sensitivity", "investment is far more valuable in the supercritical region",
       {"intervention.manifest"}, claims::investment_sensitivity},
      {"patent-optimum", "optimal patent share is 1/3, 1/9, 0, 0 for k = 2, 3, 4, 10",
       {"patent-optimum.manifest"}, claims::patent_optimum},
      {"competition", "competition payoff f(m) moves the equilibrium off criticality",
       {"competition.manifest"}, claims::competition},
      {"budget", "budget model phase follows lambda_b", {"budget.manifest"}, claims::budget},
      {"heterogeneous-beta", "heterogeneous learning rates stay near criticality",
       {"heterogeneous-beta.manifest"}, claims::heterogeneous_beta},
      {"public-innovators", "public firms keep private payoffs of order C(n-1,k-1)",
       {"public-innovators.manifest"}, claims::public_innovators},
      {"tau", "tau diagnostics at equilibria and at a forced critical profile",
       {"criticality.manifest", "tau-forced.manifest"}, claims::tau},
      {"oracles", "exact counting paths agree; Monte Carlo matches full enumeration", {},
       claims::oracles},
      {"numerics", "spectral radius, Borel mass and giant share against closed forms", {},
       claims::numerics},
      {"determinism", "CSV output does not depend on the thread count",
       {"determinism-simulate.manifest", "determinism-equilibrium.manifest"}, claims::determinism},
      {"table1", "best response and payoff ordering across the three regions",
       {"table1.manifest"}, claims::table1},
      {"patent-share", "monopoly profit curve against patent share for k = 2, 3, 5, 10",
       {"patent-share.manifest"}, claims::patent_share},
  };
  return r;
}

inline const Claim& find_claim(const std::string& id) {
  for (const auto& c : claim_registry())
    if (c.id == id) return c;
  std::string all;
  for (const auto& c : claim_registry()) all += (all.empty() ? "" : ", ") + c.id;
  throw InvalidInput("unknown claim id '" + id + "'; registered: " + all);
}

}  // namespace innonet
