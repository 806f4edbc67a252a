#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "innonet/analytics/asymptotics.hpp"
#include "innonet/analytics/branching.hpp"
#include "innonet/core/errors.hpp"
#include "innonet/core/parallel.hpp"
#include "innonet/core/rng.hpp"
#include "innonet/equilibrium/best_response.hpp"
#include "innonet/equilibrium/deviation.hpp"
#include "innonet/equilibrium/intervention.hpp"
#include "innonet/equilibrium/solver.hpp"
#include "innonet/expcli/manifest.hpp"
#include "innonet/sim/closure.hpp"
#include "innonet/sim/giant.hpp"
#include "innonet/sim/monte_carlo.hpp"
#include "innonet/sim/payoff.hpp"
#include "innonet/sim/replay.hpp"
#include "innonet/sim/tau.hpp"

namespace innonet {

/// Comma-separated table with a header row. Cells never contain commas.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  /// LF-terminated text, header first.
  std::string text() const {
    auto join = [](const std::vector<std::string>& cells) {
      std::string s;
      for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
      return s + "\n";
    };
    std::string out = join(columns);
    for (const auto& r : rows) out += join(r);
    return out;
  }

  std::size_t column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InvalidInput("no CSV column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
  }

  double value(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
  }

  /// First row whose column equals `v` (numerically).
  std::size_t find_row(const std::string& name, double v) const {
    const auto c = column(name);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (std::abs(std::stod(rows[r][c]) - v) <= 1e-9 * std::max(1.0, std::abs(v))) return r;
    throw InvalidInput("no row with " + name + " = " + std::to_string(v));
  }

  static CsvTable parse(const std::string& text) {
    CsvTable t;
    std::istringstream is(text);
    std::string line;
    auto split = [](const std::string& s) {
      std::vector<std::string> cells;
      std::stringstream ss(s);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (!s.empty() && s.back() == ',') cells.emplace_back();
      return cells;
    };
    if (std::getline(is, line)) t.columns = split(line);
    while (std::getline(is, line))
      if (!line.empty()) t.rows.push_back(split(line));
    return t;
  }
};

/// Equilibria shared between runs in one process, keyed by the entries that
/// determine them.
struct EquilibriumCache {
  std::mutex mutex;
  std::map<std::string, EquilibriumResult> results;
};

struct RunOptions {
  unsigned threads = 1;
  /// Relative file names in the manifest resolve against this directory.
  std::filesystem::path base_dir = ".";
  EquilibriumCache* cache = nullptr;
};

struct RunResult {
  /// Output file name -> table. The manifest's `out` entry names the main table.
  std::map<std::string, CsvTable> files;
  std::string main_file;
  /// Solver log, empty for experiments without a solver.
  std::string trace;
  /// Sweep points whose solver did not converge.
  std::vector<std::string> failures;
};

namespace detail {

inline std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::vector<std::string> split_cells(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

struct SweepPoint {
  /// (axis, value text) in axis order.
  std::vector<std::pair<std::string, std::string>> coords;
  std::vector<double> key;
  ExperimentManifest manifest;

  std::string label() const {
    std::string s;
    for (const auto& [a, v] : coords) s += (s.empty() ? "" : " ") + a + "=" + v;
    return s.empty() ? "(single point)" : s;
  }
};

/// Cartesian product of the sweep axes, sorted by the numeric sweep key.
inline std::vector<SweepPoint> expand_sweep(const ExperimentManifest& m) {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const auto& [key, value] : m.entries)
    if (key.rfind("sweep.", 0) == 0) {
      std::vector<std::string> vals;
      for (auto v : split_list(value)) vals.emplace_back(v);
      axes.emplace_back(key.substr(6), std::move(vals));
    }
  std::vector<SweepPoint> points(1);
  points[0].manifest = m;
  for (const auto& [axis, vals] : axes) {
    std::vector<SweepPoint> next;
    for (const auto& p : points)
      for (const auto& v : vals) {
        SweepPoint q = p;
        q.coords.emplace_back(axis, v);
        q.key.push_back(parse_number("sweep." + axis, v));
        q.manifest.set(sweep_targets().at(axis), v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  for (auto& p : points)
    for (auto it = p.manifest.entries.begin(); it != p.manifest.entries.end();)
      it = it->first.rfind("sweep.", 0) == 0 ? p.manifest.entries.erase(it) : std::next(it);
  std::stable_sort(points.begin(), points.end(),
                   [](const SweepPoint& a, const SweepPoint& b) { return a.key < b.key; });
  return points;
}

inline WorldConfig world_from(const ExperimentManifest& m) {
  WorldConfig w;
  w.n = m.integer("world.n", 0);
  w.k = m.integer("world.k", 3);
  w.delta = m.number("world.delta", 1.0);
  w.cost.family = parse_cost_family(m.text("world.cost", "inverse"));
  w.cost.c0 = m.number("world.c0", 1.0);
  w.link_cost = m.number("world.link_cost", 0.0);
  w.payoff.variant = parse_payoff_variant(m.text("payoff.variant", "baseline"));
  w.payoff.rho = m.number("payoff.rho", 1.0);
  w.payoff.phi = m.list("payoff.phi");
  w.payoff.competition = m.list("payoff.competition");
  w.seed = m.seed();
  w.validate();
  return w;
}

inline double profile_q(const ExperimentManifest& m, const WorldConfig& w) {
  if (m.has("profile.q")) return m.number("profile.q", 0.0);
  const double c = m.number("profile.c", 0.0);
  if (w.delta <= 0.0) throw ManifestError("profile.c", "needs world.delta > 0");
  const double q = std::sqrt(c / (w.delta * static_cast<double>(w.n)));
  if (q > 1.0) throw ManifestError("profile.c", "implies q > 1 at this n");
  return q;
}

inline SolverConfig solver_from(const ExperimentManifest& m, unsigned threads) {
  SolverConfig cfg;
  cfg.reps = m.integer("reps", cfg.reps);
  cfg.seed = m.seed();
  cfg.threads = threads;
  cfg.grid_points = m.integer("solver.grid_points", cfg.grid_points);
  cfg.fit_degree = m.integer("solver.fit_degree", cfg.fit_degree);
  cfg.damping = m.number("solver.damping", cfg.damping);
  cfg.max_iterations = m.integer("solver.max_iterations", cfg.max_iterations);
  cfg.tolerance_q = m.number("solver.tolerance_q", cfg.tolerance_q);
  cfg.p_init = m.number("solver.p_init", cfg.p_init);
  cfg.certificate = m.text("solver.certificate", "true") == "true";
  cfg.common_random_numbers = m.text("solver.common_random_numbers", "true") == "true";
  cfg.tau_reps = m.integer("solver.tau_reps", cfg.tau_reps);
  return cfg;
}

inline VariantSpec variant_from(const ExperimentManifest& m, const std::string& kind) {
  using Kind = VariantSpec::Kind;
  static const std::map<std::string, Kind> kinds{
      {"baseline", Kind::baseline}, {"public", Kind::public_share}, {"beta", Kind::beta},
      {"patents", Kind::patents},   {"budget", Kind::budget},       {"directed", Kind::directed},
      {"sigma", Kind::sigma}};
  VariantSpec v;
  v.kind = kinds.at(kind);
  v.share = m.number("variant.share", v.share);
  v.beta_lo = m.number("variant.beta_lo", v.beta_lo);
  v.beta_hi = m.number("variant.beta_hi", v.beta_hi);
  v.beta_bins = m.integer("variant.beta_bins", v.beta_bins);
  v.budget_lambda = m.number("variant.lambda_b", v.budget_lambda);
  v.sigma_high = static_cast<unsigned>(m.integer("variant.sigma_high", v.sigma_high));
  return v;
}

/// Variant kind implied by the experiment and the manifest.
inline std::string variant_kind(const ExperimentManifest& m) {
  const auto exp = m.experiment();
  if (exp == "budget") return "budget";
  if (exp == "patents") return "patents";
  return m.text("variant.kind", "baseline");
}

inline EquilibriumResult equilibrium_for(const ExperimentManifest& m, unsigned threads,
                                         EquilibriumCache* cache) {
  const auto kind = variant_kind(m);
  std::string key = "kind = " + kind + "\nseed = " + m.text("seed", "") +
                    "\nreps = " + m.text("reps", "") + "\n";
  for (const auto& [k, v] : m.entries)
    for (const char* prefix : {"world.", "payoff.", "variant.", "solver."})
      if (k.rfind(prefix, 0) == 0) key += k + " = " + v + "\n";
  if (cache) {
    std::lock_guard lock(cache->mutex);
    const auto it = cache->results.find(key);
    if (it != cache->results.end()) return it->second;
  }
  auto res = variant_equilibrium(world_from(m), variant_from(m, kind), solver_from(m, threads));
  if (cache) {
    std::lock_guard lock(cache->mutex);
    cache->results.emplace(key, res);
  }
  return res;
}

struct PointOutput {
  std::vector<std::vector<std::string>> rows;
  std::string trace;
  bool failed = false;
};

inline std::vector<std::string> rate_cells(const WorldConfig& w, double p, double q) {
  const double n = static_cast<double>(w.n);
  return {std::to_string(w.n), std::to_string(w.k), fmt(w.delta), fmt(p), fmt(q),
          fmt(q * q * w.delta * n), fmt(w.delta * q * q * (n - 1.0))};
}

inline PointOutput run_simulate(const ExperimentManifest& m, unsigned threads) {
  const auto w = world_from(m);
  const double p = m.number("profile.p", 0.9), q = profile_q(m, w);
  const auto profiles = symmetric_profiles(w.n, p, q);
  McOptions opt;
  opt.reps = m.integer("reps", 200);
  opt.seed = m.seed();
  opt.threads = threads;
  const auto est = expected_payoffs(w, profiles, opt);
  std::vector<double> gross;
  for (const auto& g : est.gross) gross.push_back(g.mean);
  double tau_mean = std::nan(""), tau_se = std::nan("");
  if (const auto tau_reps = m.integer("tau.reps", 0); tau_reps > 0) {
    McOptions t = opt;
    t.reps = tau_reps;
    t.seed = derive_seed(m.seed(), stream::kTau);
    std::vector<std::size_t> firms(std::min<std::size_t>(w.n, m.integer("tau.firms", 200)));
    for (std::size_t i = 0; i < firms.size(); ++i) firms[i] = i;
    const auto tau = pooled_tau(w, profiles, t, m.integer("tau.samples", 100), firms);
    tau_mean = tau.mean;
    tau_se = tau.se;
  }
  auto row = rate_cells(w, p, q);
  for (double v : {est.firm_average.mean, est.firm_average.se, mean_se(gross).mean, tau_mean, tau_se})
    row.push_back(fmt(v));
  return {{row}, "", false};
}

inline PointOutput run_phase_scan(const ExperimentManifest& m, unsigned threads) {
  const auto w = world_from(m);
  const double p = m.number("profile.p", 0.9), q = profile_q(m, w);
  McOptions opt;
  opt.reps = m.integer("reps", 100);
  opt.seed = m.seed();
  opt.threads = threads;
  const auto g = giant_learning(w, symmetric_profiles(w.n, p, q), opt);
  const auto pred = giant_prediction(w.n, p, q, w.delta);
  auto row = rate_cells(w, p, q);
  for (double v : {g.attached_share.mean, pred.alpha, g.core_share.mean, g.learned.mean,
                   g.learned.se, pred.predicted_learned})
    row.push_back(fmt(v));
  return {{row}, "", false};
}

inline PointOutput run_best_response(const ExperimentManifest& m, unsigned threads) {
  const auto w = world_from(m);
  const double p = m.number("profile.p", 0.9), q = profile_q(m, w);
  auto cfg = solver_from(m, threads);
  cfg.reps = m.integer("reps", 500);
  const DeviationModel model(w, symmetric_profiles(w.n, p, q), 0, cfg.reps, m.seed(), threads,
                             cfg.counting);
  const auto br = best_response_q(model, Rates::uniform(q), p, cfg);
  const double at_q = model.value(Rates::uniform(q), p).payoff.mean;
  auto row = rate_cells(w, p, q);
  for (double v : {br.x.to_private, br.x.to_private / q, at_q, br.value.payoff.mean})
    row.push_back(fmt(v));
  row.push_back(br.indifferent ? "1" : "0");
  return {{row}, "", false};
}

inline PointOutput equilibrium_output(const EquilibriumResult& eq, std::vector<std::string> lead,
                                      const std::string& label) {
  PointOutput out;
  for (auto& c : split_cells(eq.csv_row())) lead.push_back(std::move(c));
  out.rows.push_back(std::move(lead));
  out.trace = "== " + label + "\n" + eq.trace_log();
  out.failed = eq.status == "not converged";
  return out;
}

inline PointOutput run_equilibrium(const ExperimentManifest& m, unsigned threads,
                                   EquilibriumCache* cache, const std::string& label) {
  return equilibrium_output(equilibrium_for(m, threads, cache), {}, label);
}

inline PointOutput run_budget(const ExperimentManifest& m, unsigned threads,
                              EquilibriumCache* cache, const std::string& label) {
  const double lb = m.number("variant.lambda_b", 0.0);
  const double delta = m.number("world.delta", 1.0);
  return equilibrium_output(equilibrium_for(m, threads, cache),
                            {fmt(lb), std::string(to_string(budget_phase(lb, delta)))}, label);
}

inline PointOutput run_patents_analytic(const ExperimentManifest& m) {
  const auto k = m.integer("world.k", 2);
  const double b = m.number("variant.share", 0.0);
  return {{{std::to_string(k), fmt(b), fmt(patent_profit_curve(b, k))}}, "", false};
}

/// One equilibrium and one scan for a group of points differing only in factor.
inline PointOutput run_intervention(const ExperimentManifest& m, const std::vector<double>& factors,
                                    unsigned threads, EquilibriumCache* cache,
                                    const std::string& label) {
  const auto w = world_from(m);
  const auto eq = equilibrium_for(m, threads, cache);
  InterventionOptions opt;
  opt.reps = m.integer("intervention.reps", opt.reps);
  opt.seed = m.seed();
  opt.threads = threads;
  opt.h = m.number("intervention.h", opt.h);
  const auto scan = intervention_scan(w, eq, factors, opt);
  PointOutput out;
  for (const auto& pt : scan.points) {
    std::vector<std::string> row{std::to_string(w.n), std::to_string(w.k), fmt(w.delta),
                                 fmt(pt.factor)};
    for (double v : {eq.p_star, eq.q_star, eq.lambda_hat, pt.payoff.mean, pt.payoff.se, pt.ratio,
                     pt.dp_derivative, pt.dp_ratio})
      row.push_back(fmt(v));
    out.rows.push_back(std::move(row));
  }
  out.trace = "== " + label + "\n" + eq.trace_log();
  if (scan.guarded) out.trace += "baseline payoff <= 0: ratios undefined\n";
  out.failed = eq.status == "not converged";
  return out;
}

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& file) {
  const std::filesystem::path p(file);
  return p.is_absolute() ? p : base / p;
}

inline std::string schema_for(const ExperimentManifest& m) {
  const auto exp = m.experiment();
  const std::string rates = "n,k,delta,p,q,c,lambda,";
  if (exp == "simulate") return rates + "payoff_mean,payoff_se,gross_mean,tau_mean,tau_se";
  if (exp == "phase-scan")
    return rates +
           "giant_share,giant_share_pred,core_share,learned_mean,learned_se,learned_pred";
  if (exp == "best-response") return rates + "br_q,br_ratio,payoff_at_q,payoff_at_br,indifferent";
  if (exp == "budget") return std::string("lambda_b,predicted_class,") + EquilibriumResult::kCsvHeader;
  if (exp == "intervention")
    return "n,k,delta,factor,p_star,q_star,lambda_hat,payoff_mean,payoff_se,ratio,dp_derivative,"
           "dp_ratio";
  if (exp == "patents" && m.text("patents.mode", "analytic") == "analytic") return "k,b,profit";
  if (exp == "replay") return PayoffReport::kCsvHeader;
  return EquilibriumResult::kCsvHeader;
}

}  // namespace detail

/// Runs every sweep point of a validated manifest. Rows come out sorted by
/// sweep key and do not depend on the thread count.
inline RunResult run_manifest(const ExperimentManifest& manifest, const RunOptions& opt = {}) {
  using namespace detail;
  validate_manifest(manifest);
  RunResult res;
  res.main_file = manifest.at("out");
  const auto exp = manifest.experiment();
  const unsigned threads = static_cast<unsigned>(
      std::max<std::uint64_t>(1, opt.threads ? opt.threads : manifest.integer("threads", 1)));

  if (exp == "replay") {
    auto w = world_from([&] {
      auto m = manifest;
      m.set("world.n", "2");
      return m;
    }());
    const auto net = load_replay(resolve(opt.base_dir, manifest.at("replay.file")));
    w.n = net.n;
    const auto profiles = symmetric_profiles(net.n, manifest.number("profile.p", 0.0),
                                             manifest.number("profile.q", 0.0));
    const auto rep =
        payoff_profile(knowledge_closure(net), net, w, profiles, CountingOptions{}, manifest.seed());
    res.files[res.main_file] = CsvTable::parse(rep.to_csv());
    return res;
  }

  const auto points = expand_sweep(manifest);
  const auto schema = split_cells(schema_for(manifest));
  std::vector<std::string> lead_axes;
  if (!points.empty())
    for (const auto& [axis, v] : points[0].coords)
      if (std::find(schema.begin(), schema.end(), axis) == schema.end()) lead_axes.push_back(axis);

  // Work units: one per point, except intervention groups points that share
  // everything but the factor.
  struct Unit {
    std::vector<std::size_t> members;
  };
  std::vector<Unit> units;
  if (exp == "intervention") {
    std::map<std::vector<double>, std::size_t> group_of;
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::vector<double> key;
      for (std::size_t a = 0; a < points[i].coords.size(); ++a)
        if (points[i].coords[a].first != "factor") key.push_back(points[i].key[a]);
      const auto [it, fresh] = group_of.emplace(key, units.size());
      if (fresh) units.emplace_back();
      units[it->second].members.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < points.size(); ++i) units.push_back({{i}});
  }

  const bool across = threads > 1 && units.size() > 1;
  const unsigned inner = across ? 1u : threads;
  std::vector<PointOutput> outputs(units.size());
  const bool analytic = exp == "patents" && manifest.text("patents.mode", "analytic") == "analytic";
  parallel_for(units.size(), across ? threads : 1u, [&](std::size_t u) {
    const auto& first = points[units[u].members.front()];
    const auto& m = first.manifest;
    const auto label = first.label();
    if (exp == "simulate") outputs[u] = run_simulate(m, inner);
    else if (exp == "phase-scan") outputs[u] = run_phase_scan(m, inner);
    else if (exp == "best-response") outputs[u] = run_best_response(m, inner);
    else if (exp == "budget") outputs[u] = run_budget(m, inner, opt.cache, label);
    else if (analytic) outputs[u] = run_patents_analytic(m);
    else if (exp == "intervention") {
      std::vector<double> factors;
      for (auto i : units[u].members)
        factors.push_back(points[i].manifest.number("intervention.factor", 1.0));
      outputs[u] = run_intervention(m, factors, inner, opt.cache, label);
    } else {
      outputs[u] = run_equilibrium(m, inner, opt.cache, label);
    }
  });

  // Rows in point order; units list their points in ascending order already.
  std::vector<std::vector<std::string>> rows(points.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (std::size_t j = 0; j < units[u].members.size(); ++j) {
      const auto i = units[u].members[j];
      std::vector<std::string> row;
      for (const auto& axis : lead_axes)
        for (const auto& [a, v] : points[i].coords)
          if (a == axis) row.push_back(v);
      for (auto& c : outputs[u].rows.at(j)) row.push_back(c);
      rows[i] = std::move(row);
    }
    res.trace += outputs[u].trace;
    if (outputs[u].failed) res.failures.push_back(points[units[u].members.front()].label());
  }
  CsvTable table;
  table.columns = lead_axes;
  table.columns.insert(table.columns.end(), schema.begin(), schema.end());
  table.rows = std::move(rows);
  res.files[res.main_file] = std::move(table);

  if (analytic) {
    std::set<std::uint64_t> ks;
    for (const auto& p : points) ks.insert(p.manifest.integer("world.k", 2));
    CsvTable best;
    best.columns = {"k", "b_star", "profit_star"};
    for (auto k : ks) {
      const double b = optimal_patent_share(k);
      best.rows.push_back({std::to_string(k), fmt(b), fmt(patent_profit_curve(b, k))});
    }
    const auto stem = res.main_file.substr(0, res.main_file.size() - 4);
    res.files[stem + "_argmax.csv"] = std::move(best);
  }
  return res;
}

/// Writes every table (and the trace, when there is one) under `dir`.
/// Returns the trace path, or an empty path.
inline std::filesystem::path write_outputs(const RunResult& res, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("cannot write " + path.string());
    os << text;
  };
  for (const auto& [name, table] : res.files) write(detail::resolve(dir, name), table.text());
  if (res.trace.empty()) return {};
  const auto trace = detail::resolve(dir, res.main_file.substr(0, res.main_file.size() - 4) +
                                              ".trace.txt");
  write(trace, res.trace);
  return trace;
}

}  // namespace innonet
