#include <gtest/gtest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "innonet/expcli/claims.hpp"
#include "innonet/expcli/experiments.hpp"
#include "innonet/expcli/manifest.hpp"

using namespace innonet;
namespace fs = std::filesystem;

namespace {

const fs::path kManifests = INNONET_MANIFEST_DIR;

ExperimentManifest from_text(const std::string& body) {
  return parse_manifest("schema = innonet/1\n" + body);
}

std::string field_of(const std::string& body) {
  try {
    validate_manifest(from_text(body));
  } catch (const ManifestError& e) {
    return e.field();
  }
  return "";
}

RunOptions in_manifest_dir(unsigned threads = 1) {
  RunOptions o;
  o.threads = threads;
  o.base_dir = kManifests;
  return o;
}

const CsvTable& main_table(const RunResult& r) { return r.files.at(r.main_file); }

}  // namespace

TEST(Manifest, RoundTripIsLossless) {
  const std::string text =
      "schema = innonet/1\n"
      "# comment\n"
      "  world.k=3\n"
      "experiment = equilibrium\n"
      "seed = 42\n"
      "out = x.csv\n"
      "sweep.n = 250,  500, 1000\n"
      "world.delta = 0.50\n";
  const auto m = parse_manifest(text);
  EXPECT_EQ(m.at("world.delta"), "0.50");
  EXPECT_EQ(m.at("sweep.n"), "250,  500, 1000");
  const auto canonical = serialize_manifest(m);
  EXPECT_EQ(canonical.rfind("schema = innonet/1\n", 0), 0u);
  EXPECT_EQ(parse_manifest(canonical), m);
  EXPECT_EQ(serialize_manifest(parse_manifest(canonical)), canonical);
}

TEST(Manifest, ShippedManifestsValidateAndRoundTrip) {
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(kManifests)) {
    if (entry.path().extension() != ".manifest") continue;
    const auto m = load_manifest(entry.path());
    EXPECT_NO_THROW(validate_manifest(m)) << entry.path();
    EXPECT_EQ(parse_manifest(serialize_manifest(m)), m) << entry.path();
    ++count;
  }
  EXPECT_GE(count, 10u);
}

TEST(Manifest, ErrorsNameTheField) {
  const std::string ok = "experiment = simulate\nseed = 1\nout = a.csv\nworld.n = 50\nprofile.c = 1\n";
  EXPECT_EQ(field_of(ok), "");
  EXPECT_EQ(field_of("experiment = simulate\nout = a.csv\nworld.n = 50\nprofile.c = 1\n"), "seed");
  EXPECT_EQ(field_of(ok + "reps = many\n"), "reps");
  EXPECT_EQ(field_of(ok + "world.delta = 1..0\n"), "world.delta");
  EXPECT_EQ(field_of(ok + "world.colour = red\n"), "world.colour");
  EXPECT_EQ(field_of(ok + "sweep.z = 1, 2\n"), "sweep.z");
  EXPECT_EQ(field_of(ok + "sweep.n = 10, x\n"), "sweep.n");
  EXPECT_EQ(field_of(ok + "payoff.variant = cartel\n"), "payoff.variant");
  EXPECT_EQ(field_of(ok + "profile.q = 0.1\n"), "profile.q");
  EXPECT_EQ(field_of("experiment = simulate\nseed = 1\nout = a.txt\nworld.n = 50\nprofile.c = 1\n"),
            "out");
  EXPECT_EQ(field_of("experiment = replay\nseed = 1\nout = a.csv\n"), "replay.file");

  EXPECT_THROW(parse_manifest("experiment = simulate\n"), ManifestError);
  EXPECT_THROW(parse_manifest("schema = innonet/2\n"), ManifestError);
  EXPECT_THROW(from_text("seed = 1\nseed = 2\n"), ManifestError);
  EXPECT_THROW(from_text("just words\n"), ManifestError);
}

TEST(Run, ReplayOfFirstRealization) {
  const auto r = run_manifest(load_manifest(kManifests / "replay-figure1.manifest"), in_manifest_dir());
  const auto text = main_table(r).text();
  EXPECT_EQ(text.rfind(PayoffReport::kCsvHeader, 0), 0u);
  EXPECT_NE(text.find("\n2,1,0,0,1,"), std::string::npos) << text;
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
}

TEST(Run, OneRowPerSweepPointSortedByKey) {
  const auto m = from_text(
      "experiment = simulate\nseed = 5\nout = s.csv\nreps = 10\nworld.k = 3\n"
      "sweep.n = 120, 60\nsweep.c = 1.5, 0.5\n");
  const auto t = main_table(run_manifest(m));
  ASSERT_EQ(t.rows.size(), 4u);
  // Axes are keyed in name order: c, then n.
  EXPECT_EQ(t.columns.front(), "n");
  const std::vector<std::pair<double, double>> order{{60, 0.5}, {120, 0.5}, {60, 1.5}, {120, 1.5}};
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(t.value(r, "n"), order[r].first);
    EXPECT_NEAR(t.value(r, "c"), order[r].second, 1e-9);
  }
}

TEST(Run, AxesMissingFromTheSchemaLeadTheRow) {
  const auto m = from_text(
      "experiment = equilibrium\nseed = 3\nout = e.csv\nreps = 100\nworld.n = 60\n"
      "payoff.variant = competition\nsweep.f = 0.5, -0.5\nsolver.max_iterations = 2\n"
      "solver.tau_reps = 0\nsolver.certificate = false\n");
  const auto t = main_table(run_manifest(m));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.columns[0], "f");
  EXPECT_EQ(t.columns[1], "variant");
  EXPECT_EQ(t.rows[0][0], "-0.5");
  EXPECT_EQ(t.rows[1][0], "0.5");
}

TEST(Run, SolverFailureIsReportedWithTrace) {
  const auto m = from_text(
      "experiment = equilibrium\nseed = 3\nout = e.csv\nreps = 500\nworld.n = 200\n"
      "solver.max_iterations = 1\nsolver.tau_reps = 0\n");
  const auto r = run_manifest(m);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_NE(r.trace.find("not converged"), std::string::npos) << r.trace;
  const auto dir = fs::temp_directory_path() / "innonet_expcli_trace";
  fs::remove_all(dir);
  const auto trace = write_outputs(r, dir);
  EXPECT_EQ(trace, dir / "e.trace.txt");
  EXPECT_TRUE(fs::exists(trace));
  EXPECT_TRUE(fs::exists(dir / "e.csv"));
}

TEST(Run, PatentArgmaxRow) {
  const auto r = run_manifest(load_manifest(kManifests / "patent-optimum.manifest"), in_manifest_dir());
  EXPECT_EQ(main_table(r).rows.size(), 36u);
  const auto& best = r.files.at("patent_optimum_argmax.csv");
  EXPECT_NEAR(best.value(best.find_row("k", 2), "b_star"), 0.333, 1e-3);
  EXPECT_EQ(best.value(best.find_row("k", 10), "b_star"), 0.0);
}

TEST(Run, PhaseScanGiantShareColumn) {
  const auto m = from_text(
      "experiment = phase-scan\nseed = 1\nout = p.csv\nreps = 20\nworld.n = 2000\n"
      "profile.p = 0.9\nsweep.c = 0.5, 1, 2\n");
  const auto t = main_table(run_manifest(m));
  EXPECT_LT(t.value(t.find_row("c", 0.5), "giant_share"), 0.02);
  EXPECT_LT(t.value(t.find_row("c", 1.0), "giant_share"), 0.15);
  EXPECT_NEAR(t.value(t.find_row("c", 2.0), "giant_share"), 0.7968, 0.03);
}

TEST(Run, ByteIdenticalAcrossThreadCounts) {
  const std::vector<std::string> bodies{
      "experiment = simulate\nseed = 9\nout = s.csv\nreps = 30\nworld.k = 3\n"
      "sweep.n = 80, 160\nsweep.c = 0.7, 1.4\ntau.reps = 3\n",
      "experiment = best-response\nseed = 9\nout = b.csv\nreps = 60\nworld.n = 150\n"
      "sweep.c = 0.5, 2\n",
      "experiment = intervention\nseed = 9\nout = i.csv\nreps = 100\nintervention.reps = 20\n"
      "sweep.n = 80, 120\nsweep.factor = 1, 1.25\nsolver.tau_reps = 0\n",
  };
  for (const auto& body : bodies) {
    const auto m = from_text(body);
    const auto one = main_table(run_manifest(m, in_manifest_dir(1))).text();
    EXPECT_EQ(main_table(run_manifest(m, in_manifest_dir(2))).text(), one) << body;
    EXPECT_EQ(main_table(run_manifest(m, in_manifest_dir(8))).text(), one) << body;
  }
}

TEST(Run, InterventionSharesOneEquilibriumPerGroup) {
  const auto m = from_text(
      "experiment = intervention\nseed = 4\nout = i.csv\nreps = 100\nintervention.reps = 20\n"
      "world.n = 100\nsweep.factor = 1.25, 1\nsolver.tau_reps = 0\n");
  EquilibriumCache cache;
  RunOptions o;
  o.cache = &cache;
  const auto t = main_table(run_manifest(m, o));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(cache.results.size(), 1u);
  EXPECT_EQ(t.value(0, "factor"), 1.0);
  EXPECT_EQ(t.value(0, "ratio"), 1.0);
  EXPECT_EQ(t.value(0, "q_star"), t.value(1, "q_star"));
}

TEST(Claims, RegistryCoversEveryManifestReference) {
  for (const auto& c : claim_registry())
    for (const auto& m : c.manifests) EXPECT_TRUE(fs::exists(kManifests / m)) << c.id << " " << m;
  EXPECT_THROW(find_claim("no-such-claim"), InvalidInput);
}

TEST(Claims, DeterministicClaimsPass) {
  ClaimContext ctx(kManifests, 1);
  for (const char* id : {"example-2-2", "patent-optimum", "patent-share", "numerics"}) {
    const auto v = find_claim(id).check(ctx);
    EXPECT_TRUE(v.pass) << id;
  }
}
