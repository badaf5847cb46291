// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Run configuration: per-scenario defaults, a JSON config file and command-line
// overrides merged into one document, then checked field by field.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdv5/error.hpp"
#include "kdv5/models/equation.hpp"

namespace kdv5::cli {

using json = nlohmann::json;

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names{"solve",     "conserve", "energy",  "illposed", "approx-error",
                                              "lowbounds", "lemma61",  "scaling", "estimates"};
  return names;
}

/// A config document that violates the schema; `field` is a dotted path.
class SchemaError : public InvalidArgument {
 public:
  SchemaError(std::string field, const std::string& message)
      : InvalidArgument("field '" + field + "': " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Values given on the command line; unset members leave the file or default value alone.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<double>> lambdas;
  std::optional<double> s, delta, t_end, c0, c1, c2;
  std::optional<long long> grid_n;
  std::optional<std::string> preset;
};

namespace detail {

inline bool has_section(const json& defaults, const std::string& name) { return defaults.contains(name); }

inline bool is_power_of_two_at_least(const json& v, long long lo) {
  if (!v.is_number_integer()) return false;
  const auto n = v.get<long long>();
  return n >= lo && std::has_single_bit(static_cast<unsigned long long>(n));
}

struct Rule {
  std::function<bool(const json&)> ok;
  std::string expected;
};

inline bool finite_number(const json& v) { return v.is_number() && std::isfinite(v.get<double>()); }
inline Rule positive() {
  return {[](const json& v) { return finite_number(v) && v.get<double>() > 0.0; }, "a positive number"};
}
inline Rule non_negative() {
  return {[](const json& v) { return finite_number(v) && v.get<double>() >= 0.0; }, "a non-negative number"};
}
inline Rule any_number() { return {finite_number, "a finite number"}; }
inline Rule integer_at_least(long long lo) {
  return {[lo](const json& v) { return v.is_number_integer() && v.get<long long>() >= lo; },
          "an integer >= " + std::to_string(lo)};
}

inline const std::map<std::string, std::map<std::string, Rule>>& section_rules() {
  static const std::map<std::string, std::map<std::string, Rule>> rules{
      {"equation",
       {{"preset", {[](const json& v) { return v.is_string() && (v == "integrable" || v == "general"); },
                    "one of \"integrable\", \"general\""}},
        {"sign", {[](const json& v) { return v.is_number_integer() && std::abs(v.get<int>()) == 1; }, "+1 or -1"}},
        {"c0", any_number()},
        {"c1", any_number()},
        {"c2", any_number()}}},
      {"grid",
       {{"length", positive()},
        {"points", {[](const json& v) { return is_power_of_two_at_least(v, 8); }, "a power of two >= 8"}}}},
      {"solver", {{"dt", positive()}, {"t_end", positive()}, {"record_every", integer_at_least(1)}}},
      {"data", {{"amplitude", any_number()}, {"width", positive()}}},
      {"counterexample",
       {{"lambdas",
         {[](const json& v) {
            if (!v.is_array() || v.empty()) return false;
            double prev = 0.0;
            for (const auto& x : v) {
              if (!finite_number(x) || x.get<double>() < 1.0 || x.get<double>() <= prev) return false;
              prev = x.get<double>();
            }
            return true;
          },
          "a non-empty increasing list of numbers >= 1"}},
        {"s", non_negative()},
        {"delta", {[](const json& v) { return finite_number(v) && v.get<double>() > 0.0 && v.get<double>() < 2.0; },
                   "a number in (0, 2)"}},
        {"Lambda", positive()},
        {"envelope_points", {[](const json& v) { return is_power_of_two_at_least(v, 64); }, "a power of two >= 64"}},
        {"t_end", positive()},
        {"time_points", integer_at_least(1)},
        {"dt_max", positive()}}},
      {"diagnostic",
       {{"s", non_negative()},
        {"samples", integer_at_least(2)},
        {"k_max", {[](const json& v) { return v.is_number_integer() && v.get<int>() >= 0 && v.get<int>() <= 4; },
                   "an integer in [0, 4]"}},
        {"tolerance", positive()}}},
  };
  return rules;
}

}  // namespace detail

/// Defaults of a scenario; its top-level keys are the sections the scenario accepts.
inline json default_config(const std::string& scenario) {
  const json ce_sweep = {{"lambdas", {8.0, 16.0, 32.0}}, {"s", 3.0},   {"delta", 1.0},
                         {"Lambda", 0.1},                {"envelope_points", 8192},
                         {"t_end", 1.0},                 {"time_points", 4}, {"dt_max", 1.0 / 256.0}};
  json c = {{"scenario", scenario}, {"seed", 1u}};
  if (scenario == "solve") {
    c["equation"] = {{"preset", "general"}};
    c["grid"] = {{"length", 40.0}, {"points", 256}};
    c["solver"] = {{"dt", 1e-4}, {"t_end", 0.1}, {"record_every", 10}};
    c["data"] = {{"amplitude", 0.05}, {"width", 2.0}};
    c["diagnostic"] = {{"s", 3.0}};
  } else if (scenario == "conserve") {
    c["equation"] = {{"preset", "integrable"}};
    c["grid"] = {{"length", 300.0}, {"points", 1024}};
    c["solver"] = {{"dt", 2.5e-4}, {"t_end", 1.0}, {"record_every", 40}};
    c["data"] = {{"amplitude", 0.3}, {"width", 2.0}};
    c["diagnostic"] = {{"tolerance", 1e-6}};
  } else if (scenario == "energy") {
    c["equation"] = {{"preset", "general"}};
    c["grid"] = {{"length", 2.0 * std::numbers::pi}, {"points", 64}};
    c["solver"] = {{"dt", 2e-5}, {"t_end", 0.1}, {"record_every", 50}};
    c["diagnostic"] = {{"s", 3.0}, {"samples", 20}};
  } else if (scenario == "illposed" || scenario == "approx-error") {
    c["equation"] = {{"preset", "general"}};
    c["counterexample"] = ce_sweep;
  } else if (scenario == "lowbounds") {
    c["equation"] = {{"preset", "general"}};
    c["counterexample"] = ce_sweep;
    c["counterexample"].erase("time_points");
    c["counterexample"].erase("dt_max");
    c["diagnostic"] = {{"k_max", 2}};
  } else if (scenario == "lemma61") {
    c["counterexample"] = {{"lambdas", {16.0, 32.0, 64.0, 128.0}}, {"s", 3.0}, {"delta", 1.0}};
    c["diagnostic"] = {{"tolerance", 0.02}};
  } else if (scenario == "scaling") {
    c["equation"] = {{"preset", "general"}};
    c["grid"] = {{"length", 40.0}, {"points", 256}};
    c["solver"] = {{"dt", 1e-4}, {"t_end", 0.02}};
    c["data"] = {{"amplitude", 0.05}, {"width", 2.0}};
    c["counterexample"] = {{"lambdas", {2.0}}};
    c["diagnostic"] = {{"s", 2.7}};
  } else if (scenario == "estimates") {
    c["equation"] = {{"preset", "general"}};
    c["diagnostic"] = {{"s", 2.6}, {"samples", 100}};
  } else {
    throw SchemaError("scenario", "unknown scenario '" + scenario + "'");
  }
  return c;
}

/// Check a merged document against the scenario's schema.
inline void validate_config(const json& doc, const std::string& scenario) {
  if (!doc.is_object()) throw SchemaError("<root>", "config must be a JSON object");
  const json defaults = default_config(scenario);
  for (const auto& [key, value] : doc.items()) {
    if (key == "scenario") {
      if (!value.is_string() || value != scenario)
        throw SchemaError("scenario", "must equal the subcommand \"" + scenario + "\"");
      continue;
    }
    if (key == "seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) throw SchemaError("seed", "expected a non-negative integer");
      continue;
    }
    const auto rules = detail::section_rules().find(key);
    if (rules == detail::section_rules().end()) throw SchemaError(key, "unknown key");
    if (!detail::has_section(defaults, key)) throw SchemaError(key, "not used by scenario '" + scenario + "'");
    if (!value.is_object()) throw SchemaError(key, "expected an object");
    for (const auto& [field, v] : value.items()) {
      const auto rule = rules->second.find(field);
      if (rule == rules->second.end()) throw SchemaError(key + "." + field, "unknown key");
      if (!rule->second.ok(v)) throw SchemaError(key + "." + field, "expected " + rule->second.expected);
    }
  }
}

/// Merge defaults, then the file, then command-line overrides; validate the result.
inline json merge_config(const std::string& scenario, const json& file, const Overrides& o) {
  json doc = default_config(scenario);
  if (!file.is_null()) {
    if (!file.is_object()) throw SchemaError("<root>", "config must be a JSON object");
    validate_config(file, scenario);
    doc.merge_patch(file);
  }
  const bool ce = doc.contains("counterexample") && scenario != "scaling";
  auto set = [&](const std::string& section, const std::string& key, const json& v, const std::string& flag) {
    if (!doc.contains(section)) throw SchemaError(section, "flag " + flag + " does not apply to '" + scenario + "'");
    doc[section][key] = v;
  };
  if (o.seed) doc["seed"] = *o.seed;
  if (o.lambdas) set("counterexample", "lambdas", *o.lambdas, "--lambda");
  if (o.s) ce ? set("counterexample", "s", *o.s, "--s") : set("diagnostic", "s", *o.s, "--s");
  if (o.delta) set("counterexample", "delta", *o.delta, "--delta");
  if (o.grid_n) ce ? set("counterexample", "envelope_points", *o.grid_n, "--grid-n")
                   : set("grid", "points", *o.grid_n, "--grid-n");
  if (o.t_end) doc.contains("solver") ? set("solver", "t_end", *o.t_end, "--t-end")
                                      : set("counterexample", "t_end", *o.t_end, "--t-end");
  if (o.preset) set("equation", "preset", *o.preset, "--preset");
  if (o.c0) set("equation", "c0", *o.c0, "--c0");
  if (o.c1) set("equation", "c1", *o.c1, "--c1");
  if (o.c2) set("equation", "c2", *o.c2, "--c2");
  validate_config(doc, scenario);
  return doc;
}

/// Coefficients from the preset with any explicitly given values on top.
inline EquationParams equation_of(const json& doc) {
  const auto& e = doc.at("equation");
  EquationParams p = e.at("preset") == "integrable" ? EquationParams::integrable() : EquationParams::general();
  if (e.contains("sign")) p.sign = e["sign"].get<int>();
  if (e.contains("c0")) p.c0 = e["c0"].get<double>();
  if (e.contains("c1")) p.c1 = e["c1"].get<double>();
  if (e.contains("c2")) p.c2 = e["c2"].get<double>();
  return p;
}

}  // namespace kdv5::cli
