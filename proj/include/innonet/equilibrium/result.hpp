#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "innonet/analytics/spectral.hpp"
#include "innonet/core/parallel.hpp"
#include "innonet/model/types.hpp"
#include "innonet/sim/counting.hpp"

namespace innonet {

struct SolverConfig {
  /// Log-spaced q-grid: at least [1/grid_span, grid_span] / sqrt(delta n) and
  /// q_current times/divided by width_factor.
  std::size_t grid_points = 25;
  double grid_span = 5.0;
  double width_factor = 5.0;
  std::size_t golden_iterations = 12;
  /// Best response is the peak of a least-squares polynomial of this degree in
  /// log q over the grid. 0 uses golden-section search on the raw objective.
  std::size_t fit_degree = 4;
  std::size_t reps = 2000;
  bool common_random_numbers = true;
  double damping = 0.5;
  /// Damped iterations before q switches to bisection.
  std::size_t burn_in = 3;
  std::size_t max_iterations = 40;
  /// Relative q change, and p change within a settling round, that count as converged.
  double tolerance_q = 0.005;
  double tolerance_p = 0.005;
  double p_init = 0.9;
  /// Cap on first-order-condition rounds for p per outer iteration.
  std::size_t max_p_iterations = 12;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  CountingOptions counting{10, 200'000, 4000, CountMethod::automatic};
  double band_lo = 0.9;
  double band_hi = 1.1;
  /// Fresh-seed best-response check at the solution.
  bool certificate = true;
  double certificate_tolerance = 0.15;
  std::size_t tau_reps = 40;
  std::size_t tau_samples = 100;
  /// Firms of the main group pooled for tau.
  std::size_t tau_firms = 200;
};

struct GroupOutcome {
  std::string label;
  std::size_t size = 0;
  double p = 0.0;
  double q = 0.0;
  double q_public = 0.0;
  double q_private = 0.0;
  bool directed = false;
  MeanSe payoff;
  /// |BR(q) - q| / q with a fresh seed, or -1 when not checked.
  double certificate_gap = -1.0;
};

struct EquilibriumResult {
  std::string variant = "baseline";
  std::size_t n = 0;
  std::size_t k = 0;
  double delta = 0.0;
  double p_star = 0.0;
  double q_star = 0.0;
  double lambda_hat = 0.0;
  Criticality classification = Criticality::subcritical;
  MeanSe payoff;
  double tau_mean = 0.0;
  double tau_se = 0.0;
  std::vector<GroupOutcome> groups;
  std::vector<FirmProfile> profiles;
  bool converged = false;
  bool investment = false;
  std::string status = "ok";
  std::size_t iterations = 0;
  std::vector<std::string> trace;

  static constexpr const char* kCsvHeader =
      "variant,n,k,delta,p_star,q_star,lambda_hat,class,payoff_mean,payoff_se,tau_mean";

  std::string csv_row() const {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%.10g,%.10g,%.10g,%.10g,%s,%.10g,%.10g,%.10g",
                  variant.c_str(), n, k, delta, p_star, q_star, lambda_hat,
                  std::string(to_string(classification)).c_str(), payoff.mean, payoff.se,
                  tau_mean);
    return buf;
  }

  std::string trace_log() const {
    std::string out = "variant " + variant + " status " + status + "\n";
    for (const auto& line : trace) out += line + "\n";
    char buf[256];
    for (const auto& g : groups) {
      std::snprintf(buf, sizeof buf,
                    "group %s size %zu p %.6g q %.6g (pub %.6g priv %.6g) payoff %.6g se %.3g "
                    "gap %.3g\n",
                    g.label.c_str(), g.size, g.p, g.q, g.q_public, g.q_private, g.payoff.mean,
                    g.payoff.se, g.certificate_gap);
      out += buf;
    }
    return out;
  }
};

}  // namespace innonet
