// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Continuous extension of an integrating-factor run. Between two stored
// steps the interaction-picture amplitude v = e^{i Omega t} c is smooth (the
// fast phase is removed), so a cubic Hermite interpolant in v is accurate
// even when the linear phase rotates many times per step.

#include <algorithm>
#include <complex>
#include <vector>

#include "kdv5/integrator/if_rk4.hpp"

namespace kdv5 {

template <SpectralProblem P>
class DenseOutput {
 public:
  explicit DenseOutput(const P& problem) : problem_(problem) {}

  /// Store a state at time t; the forcing is evaluated here.
  void push(double t, const State& s) {
    require(times_.empty() || t > times_.back(), "DenseOutput: times must increase");
    State g;
    problem_.forcing(s, g);
    times_.push_back(t);
    states_.push_back(s);
    forcings_.push_back(std::move(g));
  }

  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }
  std::size_t size() const noexcept { return times_.size(); }
  const std::vector<double>& times() const noexcept { return times_; }
  const State& state(std::size_t i) const { return states_[i]; }

  State at(double t) const {
    require(!times_.empty() && t >= times_.front() - 1e-14 && t <= times_.back() + 1e-14,
            "DenseOutput: time outside the stored interval");
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t i = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
    if (i + 1 >= times_.size()) return states_.back();
    const double h = times_[i + 1] - times_[i];
    const double tau = t - times_[i];
    if (tau == 0.0) return states_[i];
    const double x = tau / h;
    const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
    const double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
    const auto omega = problem_.frequencies();
    State out(states_[i].size());
    for (std::size_t j = 0; j < out.size(); ++j) {
      const auto rot = std::polar(1.0, omega[j] * h);
      const auto v0 = states_[i][j], d0 = forcings_[i][j];
      const auto v1 = rot * states_[i + 1][j], d1 = rot * forcings_[i + 1][j];
      const auto v = h00 * v0 + h10 * h * d0 + h01 * v1 + h11 * h * d1;
      out[j] = std::polar(1.0, -omega[j] * tau) * v;
    }
    return out;
  }

 private:
  const P& problem_;
  std::vector<double> times_;
  std::vector<State> states_;
  std::vector<State> forcings_;
};

/// Integrate and keep every step for dense output.
template <SpectralProblem P>
DenseOutput<P> integrate_dense(const P& problem, State s, SolverConfig cfg) {
  cfg.record_every = 1;
  DenseOutput<P> out(problem);
  auto res = integrate(problem, s, cfg, [&](double t, const State& st) { out.push(t, st); });
  if (res.aborted) throw NumericalFailure(res.message);
  return out;
}

}  // namespace kdv5
