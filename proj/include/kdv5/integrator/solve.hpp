// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <span>
#include <string>
#include <vector>

#include "kdv5/integrator/if_rk4.hpp"
#include "kdv5/integrator/trajectory.hpp"
#include "kdv5/models/equation.hpp"

namespace kdv5 {

using TrajectoryRecord = Trajectory<SpectralField>;

namespace detail {
inline std::vector<double> dispersion_table(const TorusGrid& g, int sign) {
  std::vector<double> w(g.modes());
  for (std::size_t n = 0; n + 1 < w.size(); ++n) w[n] = dispersion(g.fundamental() * static_cast<double>(n), sign);
  w.back() = 0.0;  // Nyquist: odd symbol taken as zero
  return w;
}

inline double stiffness(double kmax, const EquationParams& p, double amp) {
  return kmax * kmax * kmax * (std::abs(p.c1) + std::abs(p.c2)) * amp + kmax * std::abs(p.c0) * amp * amp;
}
}  // namespace detail

/// The full equation on a dense grid; state is the half spectrum.
class DenseProblem {
 public:
  DenseProblem(TorusGrid grid, EquationParams p)
      : grid_(grid), p_(p), omega_(detail::dispersion_table(grid, p.sign)) {
    p_.validate();
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  const EquationParams& params() const noexcept { return p_; }
  std::span<const double> frequencies() const noexcept { return omega_; }

  SpectralField field(const State& s) const { return SpectralField(grid_, s); }
  static State state(const SpectralField& F) { return {F.coefficients().begin(), F.coefficients().end()}; }

  void forcing(const State& s, State& out) const {
    auto N = nonlinear_term(field(s), p_);
    auto c = N.coefficients();
    out.assign(c.size(), {});
    for (std::size_t n = 0; n < c.size(); ++n) out[n] = -c[n];
  }
  double amplitude(const State& s) const { return from_spectral(field(s)).max_abs(); }
  double nonlinear_rate(const State& s) const {
    return detail::stiffness(grid_.max_wavenumber(), p_, amplitude(s));
  }

 private:
  TorusGrid grid_;
  EquationParams p_;
  std::vector<double> omega_;
};

/// Evolution of d = u - u0 for a fixed reference u0:
///   d_t = -i Omega d + rhs(u0) - [N(u0 + d) - N(u0)].
/// Small departures from u0 keep full relative precision this way.
class OffsetProblem {
 public:
  OffsetProblem(SpectralField base, EquationParams p)
      : base_(std::move(base)), p_(p), omega_(detail::dispersion_table(base_.grid(), p.sign)),
        base_rhs_(rhs_spectral(base_, p)), base_amp_(from_spectral(base_).max_abs()) {
    p_.validate();
  }

  const SpectralField& base() const noexcept { return base_; }
  std::span<const double> frequencies() const noexcept { return omega_; }

  void forcing(const State& s, State& out) const {
    auto D = nonlinear_increment(base_, SpectralField(base_.grid(), s), p_);
    auto r = base_rhs_.coefficients();
    auto d = D.coefficients();
    out.assign(r.size(), {});
    for (std::size_t n = 0; n < r.size(); ++n) out[n] = r[n] - d[n];
  }
  /// Amplitude of the total field u0 + d.
  double amplitude(const State& s) const {
    return base_amp_ + from_spectral(SpectralField(base_.grid(), s)).max_abs();
  }
  double nonlinear_rate(const State& s) const {
    return detail::stiffness(base_.grid().max_wavenumber(), p_, amplitude(s));
  }

 private:
  SpectralField base_;
  EquationParams p_;
  std::vector<double> omega_;
  SpectralField base_rhs_;
  double base_amp_;
};

/// One integrating-factor RK4 step of the full equation.
inline RealField step(const RealField& u, const EquationParams& p, double dt) {
  DenseProblem problem(u.grid(), p);
  State s = DenseProblem::state(to_spectral(u));
  IntegratingFactorRk4<DenseProblem> stepper(problem);
  stepper.step(s, dt);
  if (!all_finite(s)) throw NumericalFailure("step: non-finite state after one step");
  return from_spectral(problem.field(s));
}

/// Run any spectral problem, recording probes of the converted field.
template <SpectralProblem P, class Field, class Convert>
Trajectory<Field> run_problem(const P& problem, State s, const SolverConfig& cfg,
                              const std::vector<Probe<Field>>& probes, Convert&& convert) {
  Trajectory<Field> traj;
  for (const auto& pr : probes) traj.series[pr.first];
  auto outcome = integrate(problem, s, cfg, [&](double t, const State& st) {
    Field f = convert(st);
    traj.times.push_back(t);
    for (const auto& [name, fn] : probes) {
      double v = std::nan("");
      try {
        v = fn(f);
      } catch (const std::exception& e) {
        traj.probe_failures.push_back("t=" + std::to_string(t) + " " + name + ": " + e.what());
      }
      traj.series[name].push_back(v);
    }
    if (cfg.keep_snapshots) traj.snapshots.push_back(std::move(f));
  });
  traj.aborted = outcome.aborted;
  traj.message = outcome.message;
  traj.steps = outcome.steps;
  return traj;
}

/// Solve the full equation from u0; probes see the spectral field.
inline TrajectoryRecord solve(const RealField& u0, const EquationParams& p, const SolverConfig& cfg,
                              const std::vector<Probe<SpectralField>>& probes = {}) {
  DenseProblem problem(u0.grid(), p);
  return run_problem<DenseProblem, SpectralField>(problem, DenseProblem::state(to_spectral(u0)), cfg, probes,
                                                  [&](const State& s) { return problem.field(s); });
}

/// Final state of a solve without recording anything but the end point.
inline SpectralField solve_to(const SpectralField& u0, const EquationParams& p, double t_end, double dt) {
  DenseProblem problem(u0.grid(), p);
  State s = DenseProblem::state(u0);
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.record_every = 1 << 30;
  auto out = integrate(problem, s, cfg, [](double, const State&) {});
  if (out.aborted) throw NumericalFailure(out.message);
  return problem.field(s);
}

}  // namespace kdv5
