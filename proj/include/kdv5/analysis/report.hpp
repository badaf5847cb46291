// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace kdv5 {

using json = nlohmann::json;

/// Versioned record of a diagnostic: parameters, per-sample values, fitted
/// exponents and a verdict.
struct DiagnosticReport {
  static constexpr int kSchemaVersion = 1;

  std::string name;
  json params = json::object();
  json samples = json::array();
  std::map<std::string, double> exponents;
  std::map<std::string, double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> flags;
  bool pass = false;
  std::string verdict;

  json to_json() const {
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json e = json::object(), v = json::object();
    for (const auto& [k, x] : exponents) e[k] = finite_or_null(x);
    for (const auto& [k, x] : values) v[k] = finite_or_null(x);
    return json{{"schema_version", kSchemaVersion},
                {"name", name},
                {"params", params},
                {"samples", samples},
                {"fitted_exponents", e},
                {"values", v},
                {"seeds", seeds},
                {"flags", flags},
                {"pass", pass},
                {"verdict", verdict}};
  }

  static DiagnosticReport from_json(const json& j) {
    DiagnosticReport r;
    if (j.at("schema_version").get<int>() != kSchemaVersion)
      throw std::invalid_argument("DiagnosticReport: unsupported schema version");
    r.name = j.at("name").get<std::string>();
    r.params = j.at("params");
    r.samples = j.at("samples");
    auto num = [](const json& x) { return x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>(); };
    for (const auto& [k, x] : j.at("fitted_exponents").items()) r.exponents[k] = num(x);
    for (const auto& [k, x] : j.at("values").items()) r.values[k] = num(x);
    r.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    r.flags = j.at("flags").get<std::vector<std::string>>();
    r.pass = j.at("pass").get<bool>();
    r.verdict = j.at("verdict").get<std::string>();
    return r;
  }
};

/// Per-sample seeds from a master seed (splitmix64 of master + index * golden gamma).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace kdv5
