// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Output directory handling: CSV series, JSON documents and the SHA-256
// inventory recorded in the run manifest.

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdv5/analysis/report.hpp"
#include "kdv5/error.hpp"

namespace kdv5::cli {

namespace fs = std::filesystem;

/// Shortest form that round-trips: 17 significant digits.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

/// Numeric table whose first column is the independent variable t or lambda.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    require(!header_.empty(), "CsvTable: header must not be empty");
    require(header_.front() == "t" || header_.front() == "lambda",
            "CsvTable: first column must be t or lambda, got " + header_.front());
  }

  void add(std::vector<double> row) {
    require(row.size() == header_.size(), "CsvTable: row width differs from the header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const noexcept { return header_; }
  std::size_t rows() const noexcept { return rows_.size(); }

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < header_.size(); ++i) out += (i ? "," : "") + header_[i];
    out += '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
      out += '\n';
    }
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

/// Hex SHA-256 of a byte string.
inline std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
    throw std::runtime_error("sha256: OpenSSL digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 0xF];
  }
  return hex;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

/// Writes files under one directory and keeps their digests for the manifest.
class OutputSet {
 public:
  explicit OutputSet(fs::path root) : root_(std::move(root)) { fs::create_directories(root_ / "reports"); }

  const fs::path& root() const noexcept { return root_; }

  void write_csv(const std::string& name, const CsvTable& table) { write(name, table.str(), "csv"); }

  void write_report(const DiagnosticReport& rep) {
    write("reports/" + rep.name + ".json", rep.to_json().dump(2) + "\n", "report");
  }

  /// Inventory entries {path, kind, bytes, sha256} in write order.
  const json& inventory() const noexcept { return inventory_; }

 private:
  void write(const std::string& name, const std::string& bytes, const std::string& kind) {
    const fs::path path = root_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << bytes;
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path.string());
    inventory_.erase(std::remove_if(inventory_.begin(), inventory_.end(),
                                    [&](const json& e) { return e.at("path") == name; }),
                     inventory_.end());
    inventory_.push_back({{"path", name}, {"kind", kind}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }

  fs::path root_;
  json inventory_ = json::array();
};

}  // namespace kdv5::cli
