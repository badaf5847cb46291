// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Integrating-factor RK4 for c_t = -i Omega c + G(c) on a flat vector of
// Fourier amplitudes. The linear phase is applied exactly, so the step size
// is limited by the nonlinearity only.

#include <cmath>
#include <complex>
#include <concepts>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "kdv5/error.hpp"

namespace kdv5 {

using State = std::vector<std::complex<double>>;

template <class P>
concept SpectralProblem = requires(const P& p, const State& s, State& out) {
  { p.frequencies() } -> std::convertible_to<std::span<const double>>;
  p.forcing(s, out);
  /// max |u| in physical space, used by the blow-up detector and the CFL rule.
  { p.amplitude(s) } -> std::convertible_to<double>;
  /// k_max^3 (|c1|+|c2|) amp + k_max |c0| amp^2 for the current state.
  { p.nonlinear_rate(s) } -> std::convertible_to<double>;
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  bool adaptive = false;
  double safety = 0.5;
  int record_every = 1;
  bool keep_snapshots = false;

  void validate() const {
    require(std::isfinite(dt) && dt > 0.0, "SolverConfig: dt must be positive");
    require(std::isfinite(t_end) && t_end >= 0.0, "SolverConfig: t_end must be non-negative");
    require(safety > 0.0 && safety <= 1.0, "SolverConfig: safety must lie in (0, 1]");
    require(record_every >= 1, "SolverConfig: record_every must be >= 1");
  }
};

/// Amplitude growth factor treated as blow-up.
inline constexpr double kBlowUpFactor = 1e6;

template <SpectralProblem P>
class IntegratingFactorRk4 {
 public:
  explicit IntegratingFactorRk4(const P& problem) : problem_(problem) {}

  /// One step of size dt (negative dt integrates backwards).
  void step(State& u, double dt) {
    const auto omega = problem_.frequencies();
    const std::size_t n = u.size();
    if (dt != cached_dt_ || half_.size() != n) {
      half_.resize(n);
      for (std::size_t j = 0; j < n; ++j) half_[j] = std::polar(1.0, -0.5 * omega[j] * dt);
      cached_dt_ = dt;
    }
    k1_.resize(n); k2_.resize(n); k3_.resize(n); k4_.resize(n); tmp_.resize(n);
    problem_.forcing(u, k1_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = half_[j] * (u[j] + 0.5 * dt * k1_[j]);
    problem_.forcing(tmp_, k2_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = half_[j] * u[j] + 0.5 * dt * k2_[j];
    problem_.forcing(tmp_, k3_);
    for (std::size_t j = 0; j < n; ++j) tmp_[j] = half_[j] * (half_[j] * u[j] + dt * k3_[j]);
    problem_.forcing(tmp_, k4_);
    for (std::size_t j = 0; j < n; ++j) {
      const auto e = half_[j];
      u[j] = e * e * u[j] + dt / 6.0 * (e * e * k1_[j] + 2.0 * e * (k2_[j] + k3_[j]) + k4_[j]);
    }
  }

  const P& problem() const noexcept { return problem_; }

 private:
  const P& problem_;
  double cached_dt_ = std::numeric_limits<double>::quiet_NaN();
  State half_, k1_, k2_, k3_, k4_, tmp_;
};

inline bool all_finite(const State& u) {
  for (const auto& c : u)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

struct IntegrationOutcome {
  double t_reached = 0.0;
  long steps = 0;
  bool aborted = false;
  std::string message;
};

/// Advance `u` from 0 to cfg.t_end, calling observe(t, u) at t = 0, every
/// cfg.record_every steps and at the final time. On blow-up the last good
/// state is restored and the run stops with aborted = true.
template <SpectralProblem P, class Observer>
IntegrationOutcome integrate(const P& problem, State& u, const SolverConfig& cfg, Observer&& observe) {
  cfg.validate();
  IntegratingFactorRk4<P> stepper(problem);
  IntegrationOutcome out;
  const double amp0 = std::max(problem.amplitude(u), std::numeric_limits<double>::min());
  observe(0.0, u);
  if (cfg.t_end == 0.0) return out;
  // Fixed stepping uses a uniform dt that lands exactly on t_end.
  const long fixed_steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double fixed_dt = cfg.t_end / static_cast<double>(fixed_steps);
  State last_good;
  double t = 0.0;
  while (true) {
    double dt = fixed_dt;
    if (cfg.adaptive) {
      const double rate = problem.nonlinear_rate(u);
      dt = std::min(cfg.dt, cfg.safety / (rate + 1e-300));
      dt = std::min(dt, cfg.t_end - t);
    }
    const bool last = cfg.adaptive ? (t + dt >= cfg.t_end * (1.0 - 1e-14)) : (out.steps + 1 == fixed_steps);
    last_good = u;
    stepper.step(u, dt);
    ++out.steps;
    t = cfg.adaptive ? (last ? cfg.t_end : t + dt) : cfg.t_end * static_cast<double>(out.steps) / fixed_steps;
    const double amp = all_finite(u) ? problem.amplitude(u) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(amp) || amp > kBlowUpFactor * amp0) {
      u = std::move(last_good);
      out.aborted = true;
      out.message = "blow-up detected at t = " + std::to_string(t) + " (amplitude " + std::to_string(amp) +
                    ", initial " + std::to_string(amp0) + ")";
      out.t_reached = t - dt;
      return out;
    }
    if (last || out.steps % cfg.record_every == 0) observe(t, u);
    if (last) break;
  }
  out.t_reached = t;
  return out;
}

}  // namespace kdv5
