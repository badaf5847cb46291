// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kdv5/error.hpp"

namespace kdv5 {

/// Recorded output of a run: sample times, optional snapshots and named
/// scalar series evaluated at every sample time.
template <class Snapshot>
struct Trajectory {
  std::vector<double> times;
  std::vector<Snapshot> snapshots;
  std::map<std::string, std::vector<double>> series;
  /// Probe failures as (time, probe name, message); the run continues past them.
  std::vector<std::string> probe_failures;
  bool aborted = false;
  std::string message;
  long steps = 0;

  std::size_t size() const noexcept { return times.size(); }

  const std::vector<double>& at(const std::string& name) const {
    auto it = series.find(name);
    if (it == series.end()) throw InvalidArgument("trajectory has no series named '" + name + "'");
    return it->second;
  }

  /// Index of the sample whose time is closest to t.
  std::size_t nearest(double t) const {
    require(!times.empty(), "trajectory is empty");
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
      if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
    return best;
  }
};

template <class Field>
using Probe = std::pair<std::string, std::function<double(const Field&)>>;

}  // namespace kdv5
