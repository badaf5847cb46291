// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Conservation diagnostics: drift of the three Hamiltonians along a run (and
// its response to halving dt), and the instantaneous L2 balance law.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "kdv5/analysis/report.hpp"
#include "kdv5/integrator/solve.hpp"
#include "kdv5/models/hamiltonian.hpp"
#include "kdv5/spectral/random.hpp"

namespace kdv5 {

/// Drift below this is treated as roundoff when judging the dt-halving ratio.
inline constexpr double kDriftRoundoff = 1e-13;

struct ConservationRun {
  DiagnosticReport report;
  TrajectoryRecord trajectory;  ///< the run at the configured dt
};

inline std::vector<Probe<SpectralField>> hamiltonian_probes() {
  std::vector<Probe<SpectralField>> probes;
  for (int i = 0; i < 3; ++i)
    probes.emplace_back("H" + std::to_string(i), [i](const SpectralField& F) { return hamiltonian(F, HamiltonianId(i)); });
  return probes;
}

/// max_t |H(t) - H(0)| / |H(0)|.
inline double relative_drift(const std::vector<double>& h) {
  require(!h.empty(), "relative_drift: empty series");
  double d = 0.0;
  for (double v : h) d = std::max(d, std::abs(v - h.front()));
  return d / std::max(std::abs(h.front()), 1e-300);
}

/// Runs at dt and dt/2. Passes when every drift is below the tolerance and
/// shrinks at least 4x on halving (or is already at roundoff).
inline ConservationRun conservation_check(const RealField& u0, const EquationParams& p, SolverConfig cfg,
                                          double tolerance = 1e-6) {
  cfg.validate();
  ConservationRun run;
  auto& rep = run.report;
  rep.name = "conservation";
  rep.params = {{"equation", {{"sign", p.sign}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}}},
                {"grid", {{"length", u0.grid().length()}, {"points", u0.grid().points()}}},
                {"dt", cfg.dt},
                {"t_end", cfg.t_end},
                {"tolerance", tolerance},
                {"h2_reading", kH2Reading}};
  run.trajectory = solve(u0, p, cfg, hamiltonian_probes());
  SolverConfig half = cfg;
  half.dt = 0.5 * cfg.dt;
  half.record_every = 2 * cfg.record_every;
  const auto fine = solve(u0, p, half, hamiltonian_probes());
  rep.pass = !run.trajectory.aborted && !fine.aborted;
  if (!rep.pass) rep.flags.push_back("run aborted: " + run.trajectory.message + fine.message);
  for (int i = 0; !run.trajectory.aborted && !fine.aborted && i < 3; ++i) {
    const std::string h = "H" + std::to_string(i);
    const double coarse = relative_drift(run.trajectory.at(h));
    const double halved = relative_drift(fine.at(h));
    rep.values["drift_" + h] = coarse;
    rep.values["drift_" + h + "_half_dt"] = halved;
    rep.values["halving_ratio_" + h] = coarse / std::max(halved, 1e-300);
    if (!(coarse < tolerance)) {
      rep.pass = false;
      rep.flags.push_back(h + " drift above tolerance");
    }
    if (halved > kDriftRoundoff && coarse < 4.0 * halved) {
      rep.pass = false;
      rep.flags.push_back(h + " drift does not shrink 4x when dt halves");
    }
  }
  rep.verdict = rep.pass ? "Hamiltonians conserved to the integrator's order" : "conservation checks failed";
  return run;
}

/// d/dt of (1/2)||u||^2 from rhs(u) against (c1/2 - c2) int u_x^3 on random
/// fields. The error is measured against (|c1|/2 + |c2|) ||u_x||_inf ||u_x||^2.
inline DiagnosticReport l2_identity_check(const TorusGrid& g, const EquationParams& p, int samples,
                                          std::uint64_t seed, double tolerance = 1e-9) {
  require(samples >= 1, "l2_identity_check: need at least one sample");
  DiagnosticReport rep;
  rep.name = "l2_identity";
  rep.params = {{"equation", {{"sign", p.sign}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}}},
                {"grid", {{"length", g.length()}, {"points", g.points()}}},
                {"samples", samples},
                {"seed", seed},
                {"tolerance", tolerance}};
  const int kmax = static_cast<int>(g.points() / 4);
  double worst = 0.0, worst_trend = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto sd = derive_seed(seed, static_cast<std::uint64_t>(i));
    rep.seeds.push_back(sd);
    const auto u = random_trig_field(g, kmax, sd);
    const auto r = l2_drift_rate(u, p);
    const auto ux = integer_derivative(u, 1);
    const double scale = (0.5 * std::abs(p.c1) + std::abs(p.c2)) * ux.max_abs() * std::pow(ux.l2_norm(), 2);
    const double err = std::abs(r.direct - r.closed_form) / std::max(scale, 1e-300);
    worst = std::max(worst, err);
    worst_trend = std::max(worst_trend, std::abs(r.direct) / std::max(scale, 1e-300));
    rep.samples.push_back({{"seed", sd}, {"direct", r.direct}, {"closed_form", r.closed_form}, {"error", err}});
  }
  rep.values["max_relative_error"] = worst;
  rep.pass = worst <= tolerance;
  if (p.c2 == 0.5 * p.c1) {
    rep.values["max_relative_trend"] = worst_trend;
    if (worst_trend > tolerance) {
      rep.pass = false;
      rep.flags.push_back("nonzero L2 trend although c2 = c1/2");
    }
  }
  rep.verdict = rep.pass ? "balance law holds" : "balance law violated";
  return rep;
}

}  // namespace kdv5
