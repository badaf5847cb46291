// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: one PASS/FAIL line per criterion. Arguments, if given,
// select criteria whose key contains any of them. Exit status is 1 when any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kdv5/analysis/commutators.hpp"
#include "kdv5/analysis/conservation.hpp"
#include "kdv5/analysis/estimates.hpp"
#include "kdv5/analysis/modified_energy.hpp"
#include "kdv5/counterexample/experiments.hpp"
#include "kdv5/counterexample/scaling.hpp"
#include "kdv5/integrator/solve.hpp"

using namespace kdv5;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string key;
  std::string title;
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Joins report verdicts; the outcome passes when every report passes.
Outcome from_reports(const std::vector<DiagnosticReport>& reps, const std::string& extra = "") {
  Outcome o{true, extra};
  for (const auto& r : reps) {
    o.pass = o.pass && r.pass;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += r.name + ": " + r.verdict;
    for (const auto& f : r.flags) o.detail += " [" + f + "]";
  }
  return o;
}

const std::vector<double> kSweep{8.0, 16.0, 32.0};

CounterexampleParams sweep_params(double s) {
  CounterexampleParams cp;
  cp.lambda = kSweep.front();
  cp.s = s;
  cp.delta = 1.0;
  return cp;
}

Outcome check_linear_exactness() {
  TorusGrid g(2.0 * pi, 64);
  double phase_err = 0.0, l2_err = 0.0;
  for (int sign : {1, -1}) {
    for (int k = 1; k <= 5; ++k) {
      const auto u0 = RealField::from_function(g, [k](double x) { return std::cos(k * x); });
      SolverConfig cfg;
      cfg.dt = 0.01;
      cfg.t_end = 1.0;
      cfg.record_every = 10;
      cfg.keep_snapshots = true;
      const auto tr = solve(u0, EquationParams::linear(sign), cfg);
      for (std::size_t i = 0; i < tr.size(); ++i) {
        const double t = tr.times[i];
        const double w = sign * std::pow(k, 5);
        const auto exact = RealField::from_function(g, [&](double x) { return std::cos(k * x - w * t); });
        const auto u = from_spectral(tr.snapshots[i]);
        for (std::size_t j = 0; j < g.points(); ++j)
          phase_err = std::max(phase_err, std::abs(u.samples()[j] - exact.samples()[j]));
        l2_err = std::max(l2_err, std::abs(u.l2_norm() / u0.l2_norm() - 1.0));
      }
    }
  }
  return {phase_err < 1e-12 && l2_err < 1e-12, "max phase error " + fmt(phase_err) + ", L2 deviation " + fmt(l2_err)};
}

Outcome check_integrator_order() {
  const auto p = EquationParams::general();
  // Temporal self-convergence over four step sizes.
  TorusGrid g(16.0 * pi, 64);
  const double k = g.fundamental();
  const auto u0 = to_spectral(RealField::from_function(g, [k](double x) {
    return 0.1 * (std::cos(k * x) + 0.6 * std::sin(2 * k * x + 0.3) + 0.25 * std::cos(3 * k * x - 1.0));
  }));
  std::vector<SpectralField> sols;
  for (double dt : {0.04, 0.02, 0.01, 0.005, 0.0025}) sols.push_back(solve_to(u0, p, 1.0, dt));
  bool ok = true;
  std::string detail = "orders";
  for (std::size_t i = 0; i + 2 < sols.size(); ++i) {
    const double order =
        std::log2((sols[i] - sols[i + 1]).l2_norm() / (sols[i + 1] - sols[i + 2]).l2_norm());
    ok = ok && order >= 3.7 && order <= 4.3;
    detail += " " + fmt(order);
  }
  // Spatial refinement against a 128-point reference for analytic data.
  const TorusGrid ref_grid(2.0 * pi, 128);
  auto data = [](const TorusGrid& gg) {
    return RealField::from_function(gg, [](double x) { return 0.02 / (2.0 - std::cos(x)); });
  };
  const double T = 0.01, dt = 5e-6;
  const auto ref = solve_to(to_spectral(data(ref_grid)), p, T, dt);
  std::vector<double> errs;
  for (std::size_t n : {8, 16, 32, 64}) {
    const auto sol = from_spectral(solve_to(to_spectral(data(TorusGrid(2.0 * pi, n))), p, T, dt));
    errs.push_back((to_spectral(resample(sol, ref_grid.points())) - ref).l2_norm() / ref.l2_norm());
  }
  detail += "; spatial errors";
  for (std::size_t i = 0; i < errs.size(); ++i) {
    detail += " " + fmt(errs[i]);
    if (i > 0 && errs[i] > 1e-12 && errs[i - 1] < 10.0 * errs[i]) ok = false;
  }
  return {ok, detail};
}

Outcome check_hierarchy_conservation() {
  TorusGrid g(300.0, 1024);
  const auto u0 = RealField::from_function(
      g, [](double x) { return 0.3 * std::exp(-(x / 2.0) * (x / 2.0)) * std::cos(x / 2.0); });
  SolverConfig cfg;
  cfg.dt = 2.5e-4;
  cfg.t_end = 1.0;
  cfg.record_every = 40;
  auto run = conservation_check(u0, EquationParams::integrable(), cfg, 1e-6);
  std::string d;
  for (int i = 0; i < 3; ++i) {
    const std::string h = "H" + std::to_string(i);
    if (run.report.values.count("drift_" + h))
      d += h + " drift " + fmt(run.report.values.at("drift_" + h)) + " (x" +
           fmt(run.report.values.at("halving_ratio_" + h)) + " on halving), ";
  }
  if (!d.empty()) d.resize(d.size() - 2);
  return from_reports({run.report}, d);
}

Outcome check_l2_identity() {
  const TorusGrid g(2.0 * pi, 128);
  auto general = l2_identity_check(g, EquationParams::general(), 100, 11);
  auto integrable = l2_identity_check(g, EquationParams::integrable(), 100, 12);
  return from_reports({general, integrable},
                      "worst relative error " + fmt(std::max(general.values.at("max_relative_error"),
                                                             integrable.values.at("max_relative_error"))));
}

Outcome check_modified_energy() {
  SolverConfig cfg;
  cfg.dt = 2e-5;
  cfg.t_end = 0.1;
  cfg.record_every = 50;
  auto run = modified_energy_check(EquationParams::general(), 3.0, TorusGrid(2.0 * pi, 64), cfg, 100, 21);
  return from_reports({run.report}, "a_s " + fmt(run.report.values.at("a_s")));
}

Outcome check_commutators() { return from_reports({commutator_sweep(3.0, 8, 512, 31), commutator_sweep(2.6, 8, 512, 32)}); }

Outcome check_dispersive() {
  const auto p = EquationParams::general();
  const std::vector<StrichartzTriple> triples{
      {0.6, 5.0, 10.0}, {0.5, 5.0, kInfinity}, {0.75, 4.0, kInfinity}, {0.0, kInfinity, 2.0}};
  auto sc = strichartz_config();
  sc.seed = 41;
  auto strichartz = strichartz_ensemble(triples, sc, p.sign);
  auto mc = maximal_config();
  mc.seed = 42;
  auto maximal = maximal_ensemble(default_diagnostics(mc.grid), mc, 0.1, p.sign);
  auto lc = smoothing_config();
  lc.seed = 43;
  auto smoothing = smoothing_ensemble(p, 2.6, default_diagnostics(lc.grid), lc);
  return from_reports({strichartz, maximal, smoothing},
                      "endpoint deviation " + fmt(strichartz.values.at("endpoint_deviation")));
}

Outcome check_carrier_norm_limit() {
  auto rep = lemma61_report(3.0, 1.0, {16.0, 32.0, 64.0, 128.0}, 0.02);
  return from_reports({rep}, "relative error at the largest lambda " +
                                 fmt(std::abs(rep.samples.back().at("value").get<double>() - rep.values.at("reference")) /
                                     rep.values.at("reference")));
}

Outcome check_low_part_laws() {
  auto rep = lowbound_check(sweep_params(3.0), EquationParams::general(), 2, kSweep, 1.0);
  return from_reports({rep}, "drift slope " + fmt(rep.exponents.at("drift")));
}

Outcome check_residual_laws() {
  auto a = residual_sweep(sweep_params(3.0), EquationParams::general(), kSweep, 0.5);
  auto b = residual_sweep(sweep_params(1.0), EquationParams::integrable(), kSweep, 0.5);
  return from_reports({a.report, b.report}, "F slopes " + fmt(a.report.exponents.at("F_L2")) + " (s=3), " +
                                                fmt(b.report.exponents.at("F_L2")) + " (s=1)");
}

Outcome check_approximation_error() {
  std::vector<DiagnosticReport> reps;
  std::string d = "final H^s errors";
  for (auto [s, p] : {std::pair{3.0, EquationParams::general()}, std::pair{1.0, EquationParams::integrable()}}) {
    std::vector<ApproxErrorCurve> curves;
    for (double lam : kSweep) curves.push_back(approx_error_curve(sweep_params(s).with_lambda(lam), p, {0.5, 1.0}));
    for (const auto& c : curves) d += " " + fmt(c.error_hs.back());
    d += s == 3.0 ? " (s=3);" : " (s=1)";
    reps.push_back(approx_error_report(curves, sweep_params(s), p));
  }
  return from_reports(reps, d);
}

Outcome check_separation() {
  const auto p = EquationParams::general();
  const auto cp = sweep_params(3.0);
  std::vector<SeparationCurve> curves;
  for (double lam : kSweep) curves.push_back(separation_curve(cp.with_lambda(lam), p, {0.0, 0.25, 0.5, 1.0}));
  auto rep = separation_report(curves, cp, p);
  std::string d = "initial slope " + fmt(rep.exponents.at("initial_separation")) + ", envelope ratios";
  for (const auto& [k, v] : rep.values)
    if (k.rfind("envelope_ratio", 0) == 0) d += " " + fmt(v);
  return from_reports({rep}, d);
}

Outcome check_scaling() {
  TorusGrid g(40.0, 256);
  const auto u0 = RealField::from_function(
      g, [](double x) { return 0.05 * std::exp(-(x / 2.0) * (x / 2.0)) * std::cos(x / 2.0); });
  auto rep = scaling_check(u0, EquationParams::general(), {2.0}, 0.02, 1e-4, 2.7);
  return from_reports({rep}, "flow difference " + fmt(rep.values.at("max_flow_rel_diff")) + ", identity error " +
                                 fmt(rep.values.at("max_identity_error")));
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {"linear", "linear exactness", check_linear_exactness},
      {"order", "integrator order", check_integrator_order},
      {"conservation", "hierarchy conservation", check_hierarchy_conservation},
      {"l2", "L2 identity", check_l2_identity},
      {"energy", "modified energy", check_modified_energy},
      {"commutator", "commutator estimates", check_commutators},
      {"dispersive", "dispersive diagnostics", check_dispersive},
      {"limit", "carrier norm limit", check_carrier_norm_limit},
      {"lowbounds", "low-part power laws", check_low_part_laws},
      {"residual", "residual laws", check_residual_laws},
      {"approx", "approximation error decay", check_approximation_error},
      {"separation", "separation of nearby solutions", check_separation},
      {"scaling", "scaling symmetry", check_scaling},
  };
  bool all = true;
  for (const auto& c : criteria) {
    bool selected = argc < 2;
    for (int i = 1; i < argc; ++i) selected = selected || c.key.find(argv[i]) != std::string::npos;
    if (!selected) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all = all && o.pass;
    std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.title.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
