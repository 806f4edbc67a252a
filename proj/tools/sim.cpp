#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "innonet/expcli/claims.hpp"
#include "innonet/expcli/experiments.hpp"
#include "innonet/expcli/manifest.hpp"

namespace fs = std::filesystem;
using namespace innonet;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitSolver = 3;
constexpr int kExitClaimFailed = 1;

fs::path output_dir(const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("INNONET_OUT_DIR"); env && *env) return env;
  return "out";
}

int run_command(const std::string& path, const std::optional<std::uint64_t>& seed,
                const std::optional<std::uint64_t>& reps, unsigned threads,
                const std::optional<std::string>& out) {
  ExperimentManifest m;
  try {
    m = load_manifest(path);
    if (seed) m.set("seed", std::to_string(*seed));
    if (reps) m.set("reps", std::to_string(*reps));
    validate_manifest(m);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid manifest " << path << ": " << e.what() << "\n";
    return kExitInvalid;
  }
  RunOptions opt;
  opt.threads = threads;
  opt.base_dir = fs::path(path).parent_path();
  if (opt.base_dir.empty()) opt.base_dir = ".";
  const auto res = run_manifest(m, opt);
  const auto dir = output_dir(out);
  const auto trace = write_outputs(res, dir);
  for (const auto& [name, table] : res.files)
    std::cout << "wrote " << (dir / name).string() << " (" << table.rows.size() << " rows)\n";
  if (!res.failures.empty()) {
    for (const auto& f : res.failures) std::cerr << "solver did not converge at " << f << "\n";
    std::cerr << "trace: " << trace.string() << "\n";
    return kExitSolver;
  }
  return 0;
}

int reproduce_command(const std::string& id, const std::string& manifest_dir, unsigned threads,
                      const std::optional<std::string>& out) {
  const auto& claim = find_claim(id);
  std::cout << claim.id << ": " << claim.summary << "\n";
  for (const auto& m : claim.manifests) std::cout << "manifest " << (fs::path(manifest_dir) / m).string() << "\n";
  ClaimContext ctx(manifest_dir, threads, output_dir(out));
  const auto verdict = claim.check(ctx);
  for (const auto& line : verdict.lines) std::cout << "  " << line << "\n";
  std::cout << (verdict.pass ? "PASS " : "FAIL ") << claim.id << "\n";
  return verdict.pass ? 0 : kExitClaimFailed;
}

int replay_command(const std::string& file, std::uint64_t k, const std::optional<std::uint64_t>& seed,
                   const std::optional<std::string>& out) {
  ExperimentManifest m;
  m.set("experiment", "replay");
  m.set("replay.file", fs::absolute(file).string());
  m.set("seed", std::to_string(seed.value_or(0)));
  m.set("world.k", std::to_string(k));
  m.set("out", fs::path(file).stem().string() + "_payoffs.csv");
  const auto res = run_manifest(m);
  const auto& table = res.files.at(res.main_file);
  if (out) {
    write_outputs(res, *out);
    std::cout << "wrote " << (fs::path(*out) / res.main_file).string() << "\n";
  } else {
    std::cout << table.text();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Innovation network experiments"};
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed, reps;
  std::optional<std::string> out;
  unsigned threads = 1;
  app.add_option("--seed", seed, "Override the manifest seed");
  app.add_option("--reps", reps, "Override the manifest replication count");
  app.add_option("--threads", threads, "Worker threads (0 = hardware)");
  app.add_option("--out", out, "Output directory (default $INNONET_OUT_DIR, else ./out)");

  std::string manifest_path;
  auto* run = app.add_subcommand("run", "Run an experiment manifest");
  run->add_option("manifest", manifest_path, "Manifest file")->required();
  run->fallthrough();

  std::string claim_id;
  std::string manifest_dir = INNONET_MANIFEST_DIR;
  bool list = false;
  auto* reproduce = app.add_subcommand("reproduce", "Run a registered claim and check it");
  reproduce->add_option("id", claim_id, "Claim id");
  reproduce->add_option("--manifests", manifest_dir, "Directory of canonical manifests");
  reproduce->add_flag("--list", list, "List registered claim ids");
  reproduce->fallthrough();

  std::string replay_file;
  std::uint64_t k = 3;
  auto* replay = app.add_subcommand("replay", "Payoffs of a recorded realization");
  replay->add_option("file", replay_file, "Realization file")->required();
  replay->add_option("--k", k, "Ideas per technology");
  replay->fallthrough();

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return run_command(manifest_path, seed, reps, threads, out);
    if (*reproduce) {
      if (list) {
        for (const auto& c : claim_registry()) std::cout << c.id << "  " << c.summary << "\n";
        return 0;
      }
      if (claim_id.empty()) {
        std::cerr << "reproduce needs a claim id (see --list)\n";
        return kExitInvalid;
      }
      if (seed || reps) {
        std::cerr << "reproduce runs canonical manifests with pinned seeds and reps; "
                     "use run to override them\n";
        return kExitInvalid;
      }
      return reproduce_command(claim_id, manifest_dir, threads, out);
    }
    if (*replay) return replay_command(replay_file, k, seed, out);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
