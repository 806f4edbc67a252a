// Acceptance run: one PASS/FAIL line per criterion, each backed by a
// registered claim and its canonical manifests.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "innonet/expcli/claims.hpp"

using namespace innonet;

int main(int argc, char** argv) {
  const std::filesystem::path out = argc > 1 ? argv[1] : "";
  ClaimContext ctx(INNONET_MANIFEST_DIR, 1, out);
  struct Criterion {
    const char* id;
    /// Wall-clock limit in seconds, 0 for none.
    double limit;
  };
  const std::vector<Criterion> criteria{
      {"example-2-2", 1.0},    {"criticality", 600.0},       {"direct-learning", 0},
      {"giant-component", 0},  {"openness-payoff", 0},           {"investment-sensitivity", 0},
      {"patent-optimum", 1.0}, {"competition", 0},           {"budget", 0},
      {"heterogeneous-beta", 0}, {"public-innovators", 0},   {"tau", 0},
      {"oracles", 0},          {"numerics", 0},              {"determinism", 0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto& claim = find_claim(c.id);
    const auto start = std::chrono::steady_clock::now();
    ClaimVerdict v;
    try {
      v = claim.check(ctx);
    } catch (const std::exception& e) {
      v.expect(false, std::string("error: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0)
      v.expect(secs <= c.limit, "finished in " + claims::num(secs, 3) + " s (limit " +
                                    claims::num(c.limit, 3) + " s)");
    if (!v.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", i + 1, c.id,
                claim.summary.c_str(), secs);
    for (const auto& line : v.lines) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
