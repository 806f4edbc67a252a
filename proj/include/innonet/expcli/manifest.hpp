#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "innonet/core/errors.hpp"

namespace innonet {

inline constexpr std::string_view kManifestSchema = "innonet/1";

/// Manifest problem tied to one field.
class ManifestError : public InvalidInput {
 public:
  ManifestError(std::string field, const std::string& what)
      : InvalidInput(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Experiment description: a flat set of dotted `key = value` entries.
///
///   schema = innonet/1
///   experiment = equilibrium
///   seed = 7
///   out = criticality.csv
///   world.k = 3
///   sweep.n = 250, 500, 1000
///
/// Values keep their source text, so parse and serialize round-trip exactly.
/// Serialization writes the schema line first, then keys in sorted order.
struct ExperimentManifest {
  std::map<std::string, std::string> entries;

  bool has(const std::string& key) const { return entries.count(key) != 0; }
  const std::string& at(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ManifestError(key, "required");
    return it->second;
  }
  void set(const std::string& key, std::string value) { entries[key] = std::move(value); }

  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? at(key) : fallback;
  }
  double number(const std::string& key, double fallback) const;
  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> list(const std::string& key) const;

  std::string experiment() const { return at("experiment"); }
  std::uint64_t seed() const { return integer("seed", 0); }

  friend bool operator==(const ExperimentManifest&, const ExperimentManifest&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_number(const std::string& field, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ManifestError(field, "expected a number, got '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_integer(const std::string& field, std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ManifestError(field, "expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  for (;;) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace detail

inline double ExperimentManifest::number(const std::string& key, double fallback) const {
  return has(key) ? detail::parse_number(key, at(key)) : fallback;
}

inline std::uint64_t ExperimentManifest::integer(const std::string& key,
                                                 std::uint64_t fallback) const {
  return has(key) ? detail::parse_integer(key, at(key)) : fallback;
}

inline std::vector<double> ExperimentManifest::list(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  for (auto item : detail::split_list(at(key))) out.push_back(detail::parse_number(key, item));
  return out;
}

inline ExperimentManifest parse_manifest(std::istream& is) {
  ExperimentManifest m;
  std::string line;
  std::size_t lineno = 0;
  bool schema_seen = false;
  while (std::getline(is, line)) {
    ++lineno;
    auto s = detail::trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    const std::string where = "line " + std::to_string(lineno);
    if (eq == std::string_view::npos) throw ManifestError(where, "expected 'key = value'");
    const std::string key(detail::trim(s.substr(0, eq)));
    const std::string value(detail::trim(s.substr(eq + 1)));
    if (key.empty()) throw ManifestError(where, "empty key");
    if (key.find_first_of(" \t") != std::string::npos)
      throw ManifestError(where, "key '" + key + "' contains whitespace");
    if (key == "schema") {
      if (value != kManifestSchema)
        throw ManifestError("schema", "unsupported schema '" + value + "', expected " +
                                          std::string(kManifestSchema));
      schema_seen = true;
      continue;
    }
    if (!schema_seen) throw ManifestError("schema", "must be the first entry");
    if (m.has(key)) throw ManifestError(key, "duplicate key");
    m.entries.emplace(key, value);
  }
  if (!schema_seen) throw ManifestError("schema", "required");
  return m;
}

inline ExperimentManifest parse_manifest(const std::string& text) {
  std::istringstream is(text);
  return parse_manifest(is);
}

inline ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("cannot open manifest " + path.string());
  return parse_manifest(is);
}

inline std::string serialize_manifest(const ExperimentManifest& m) {
  std::string out = "schema = " + std::string(kManifestSchema) + "\n";
  for (const auto& [k, v] : m.entries) out += k + " = " + v + "\n";
  return out;
}

/// Sweep axes and the entry each one overrides at a sweep point.
inline const std::map<std::string, std::string>& sweep_targets() {
  static const std::map<std::string, std::string> t{
      {"b", "variant.share"},    {"c", "profile.c"},
      {"delta", "world.delta"},  {"f", "payoff.competition"},
      {"factor", "intervention.factor"}, {"k", "world.k"},
      {"lambda_b", "variant.lambda_b"},  {"n", "world.n"},
      {"rho", "payoff.rho"}};
  return t;
}

inline const std::vector<std::string>& registered_experiments() {
  static const std::vector<std::string> e{"simulate", "best-response", "equilibrium",
                                          "phase-scan", "intervention", "patents",
                                          "budget", "replay"};
  return e;
}

namespace detail {

enum class FieldKind { integer, number, text, list, choice, flag };

struct FieldRule {
  FieldKind kind;
  std::vector<std::string> choices;
};

inline const std::map<std::string, FieldRule>& field_rules() {
  using K = FieldKind;
  static const std::map<std::string, FieldRule> r{
      {"experiment", {K::choice, registered_experiments()}},
      {"seed", {K::integer, {}}},
      {"reps", {K::integer, {}}},
      {"threads", {K::integer, {}}},
      {"out", {K::text, {}}},
      {"world.n", {K::integer, {}}},
      {"world.k", {K::integer, {}}},
      {"world.delta", {K::number, {}}},
      {"world.c0", {K::number, {}}},
      {"world.cost", {K::choice, {"inverse", "log"}}},
      {"world.link_cost", {K::number, {}}},
      {"payoff.variant",
       {K::choice, {"baseline", "rho", "phi", "competition", "patents", "public"}}},
      {"payoff.rho", {K::number, {}}},
      {"payoff.phi", {K::list, {}}},
      {"payoff.competition", {K::list, {}}},
      {"profile.p", {K::number, {}}},
      {"profile.q", {K::number, {}}},
      {"profile.c", {K::number, {}}},
      {"variant.kind",
       {K::choice, {"baseline", "public", "beta", "patents", "budget", "directed", "sigma"}}},
      {"variant.share", {K::number, {}}},
      {"variant.beta_lo", {K::number, {}}},
      {"variant.beta_hi", {K::number, {}}},
      {"variant.beta_bins", {K::integer, {}}},
      {"variant.lambda_b", {K::number, {}}},
      {"variant.sigma_high", {K::integer, {}}},
      {"solver.grid_points", {K::integer, {}}},
      {"solver.fit_degree", {K::integer, {}}},
      {"solver.damping", {K::number, {}}},
      {"solver.max_iterations", {K::integer, {}}},
      {"solver.tolerance_q", {K::number, {}}},
      {"solver.p_init", {K::number, {}}},
      {"solver.certificate", {K::flag, {}}},
      {"solver.common_random_numbers", {K::flag, {}}},
      {"solver.tau_reps", {K::integer, {}}},
      {"tau.reps", {K::integer, {}}},
      {"tau.samples", {K::integer, {}}},
      {"tau.firms", {K::integer, {}}},
      {"intervention.factor", {K::number, {}}},
      {"intervention.h", {K::number, {}}},
      {"intervention.reps", {K::integer, {}}},
      {"patents.mode", {K::choice, {"analytic", "equilibrium"}}},
      {"replay.file", {K::text, {}}},
  };
  return r;
}

inline void check_field(const std::string& key, const std::string& value, const FieldRule& rule) {
  switch (rule.kind) {
    case FieldKind::integer: parse_integer(key, value); break;
    case FieldKind::number: parse_number(key, value); break;
    case FieldKind::list:
      for (auto item : split_list(value)) parse_number(key, item);
      break;
    case FieldKind::text:
      if (value.empty()) throw ManifestError(key, "empty value");
      break;
    case FieldKind::choice:
      if (std::find(rule.choices.begin(), rule.choices.end(), value) == rule.choices.end()) {
        std::string all;
        for (const auto& c : rule.choices) all += (all.empty() ? "" : ", ") + c;
        throw ManifestError(key, "'" + value + "' is not one of: " + all);
      }
      break;
    case FieldKind::flag:
      if (value != "true" && value != "false")
        throw ManifestError(key, "expected true or false, got '" + value + "'");
      break;
  }
}

}  // namespace detail

/// Checks every field; throws ManifestError naming the first bad one.
inline void validate_manifest(const ExperimentManifest& m) {
  for (const char* key : {"experiment", "seed", "out"})
    if (!m.has(key)) throw ManifestError(key, "required");
  const auto& rules = detail::field_rules();
  for (const auto& [key, value] : m.entries) {
    if (key.rfind("sweep.", 0) == 0) {
      const auto axis = key.substr(6);
      if (!sweep_targets().count(axis)) throw ManifestError(key, "unknown sweep axis '" + axis + "'");
      const bool integral = axis == "n" || axis == "k";
      for (auto item : detail::split_list(value)) {
        if (integral) detail::parse_integer(key, item);
        else detail::parse_number(key, item);
      }
      continue;
    }
    const auto rule = rules.find(key);
    if (rule == rules.end()) throw ManifestError(key, "unknown key");
    detail::check_field(key, value, rule->second);
  }
  const auto exp = m.experiment();
  if (m.has("reps") && m.integer("reps", 1) == 0) throw ManifestError("reps", "must be >= 1");
  const auto& out = m.at("out");
  if (out.size() < 5 || out.substr(out.size() - 4) != ".csv")
    throw ManifestError("out", "must name a .csv file");
  bool swept = false;
  for (const auto& [key, value] : m.entries) swept = swept || key.rfind("sweep.", 0) == 0;
  if (exp == "replay") {
    if (!m.has("replay.file")) throw ManifestError("replay.file", "required for replay");
    if (swept) throw ManifestError("experiment", "replay does not take sweep axes");
    return;
  }
  const bool analytic_patents = exp == "patents" && m.text("patents.mode", "analytic") == "analytic";
  if (analytic_patents) {
    if (!m.has("sweep.b")) throw ManifestError("sweep.b", "required for analytic patents");
    return;
  }
  if (!m.has("world.n") && !m.has("sweep.n"))
    throw ManifestError("world.n", "required (or sweep.n)");
  if ((exp == "simulate" || exp == "best-response" || exp == "phase-scan") &&
      !m.has("profile.q") && !m.has("profile.c") && !m.has("sweep.c"))
    throw ManifestError("profile.q", "required (or profile.c / sweep.c)");
  if (m.has("profile.q") && (m.has("profile.c") || m.has("sweep.c")))
    throw ManifestError("profile.q", "conflicts with profile.c / sweep.c");
  if (exp == "intervention" && !m.has("sweep.factor") && !m.has("intervention.factor"))
    throw ManifestError("sweep.factor", "required for intervention");
  if (exp == "budget" && !m.has("variant.lambda_b") && !m.has("sweep.lambda_b"))
    throw ManifestError("variant.lambda_b", "required for budget (or sweep.lambda_b)");
}

}  // namespace innonet
