// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Lambda sweeps over the two-scale family: power laws of the low part, the
// limit of the normalized carrier norm, the distance to the approximate
// solution and the separation of the omega = +1 and omega = -1 solutions.

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "kdv5/analysis/fit.hpp"
#include "kdv5/analysis/report.hpp"
#include "kdv5/counterexample/construction.hpp"
#include "kdv5/parallel.hpp"

namespace kdv5 {

/// Largest step used for carrier-form solves.
inline constexpr double kCarrierStep = 1.0 / 256.0;

/// The full equation in carrier form, returning the field at each of the
/// non-decreasing `times`.
inline std::vector<BandedField> solve_banded(const BandedField& u0, const EquationParams& p,
                                             const std::vector<double>& times, double dt_max = kCarrierStep) {
  require(!times.empty() && times.front() >= 0.0, "solve_banded: times must be non-negative");
  require(std::is_sorted(times.begin(), times.end()), "solve_banded: times must be non-decreasing");
  BandedProblem problem(u0.grid(), p);
  State s = u0.state();
  std::vector<BandedField> out;
  double t = 0.0;
  for (double target : times) {
    if (target > t) {
      SolverConfig cfg;
      cfg.t_end = target - t;
      cfg.dt = dt_max;
      auto res = integrate(problem, s, cfg, [](double, const State&) {});
      if (res.aborted) throw NumericalFailure("solve_banded: " + res.message);
      t = target;
    }
    out.push_back(problem.field(s));
  }
  return out;
}

/// Reference value of the normalized carrier norm, ||phi||_{L^2} / sqrt(2).
inline double lemma61_reference() { return std::sqrt(0.5 * bump_phi_norm_squared()); }

struct Lemma61Result {
  std::vector<double> lambdas, values;
  double estimate = 0.0;   ///< Richardson limit from the two largest lambdas
  double reference = 0.0;  ///< ||phi|| / sqrt(2)
  bool monotone = false;   ///< |value - reference| strictly decreasing down to roundoff
  double relative_error() const { return std::abs(values.back() - reference) / reference; }
};

/// lambda^{-(4+delta)/2-s} ||phi_l sin(lambda x + alpha)||_{H^s} for one lambda.
inline double normalized_carrier_norm(double s, double delta, double alpha, double lambda,
                                      std::size_t envelope_points = 4096) {
  const double scale = std::pow(lambda, 4.0 + delta);
  const double min_length = 16.0 * scale;
  // The carrier must clear the envelope band; small lambdas get a smaller envelope grid.
  const auto cycles = static_cast<std::size_t>(std::ceil(min_length * lambda / (2.0 * std::numbers::pi)));
  const std::size_t points = std::min(envelope_points, std::bit_floor(2 * cycles));
  const auto g = CarrierGrid::fit(lambda, min_length, points, 1);
  const auto phi = bump_phi(g.envelope(), scale);
  // phi sin(lambda x + alpha) = 2 Re(A e^{i lambda x}) with A = phi e^{i alpha} / (2i).
  const cplx c = std::polar(1.0, alpha) / cplx(0.0, 2.0);
  std::vector<cplx> e(g.points());
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = c * phi[j];
  BandedField f(g);
  f.set_envelope(1, e);
  return std::pow(lambda, -0.5 * (4.0 + delta) - s) * f.sobolev(s);
}

/// Normalized norms along increasing lambdas and a Richardson limit assuming
/// an O(lambda^{-2}) approach.
inline Lemma61Result lemma61_limit(double s, double delta, double alpha_phase, const std::vector<double>& lambdas) {
  require(lambdas.size() >= 2, "lemma61_limit: need at least two lambdas");
  require(std::is_sorted(lambdas.begin(), lambdas.end()) &&
              std::adjacent_find(lambdas.begin(), lambdas.end()) == lambdas.end(),
          "lemma61_limit: lambdas must be strictly increasing");
  require(s >= 0.0 && std::isfinite(s), "lemma61_limit: s must be non-negative");
  require(delta > 0.0 && delta < 2.0, "lemma61_limit: delta must lie in (0, 2)");
  Lemma61Result r;
  r.lambdas = lambdas;
  r.reference = lemma61_reference();
  for (double l : lambdas) r.values.push_back(normalized_carrier_norm(s, delta, alpha_phase, l));
  const std::size_t n = lambdas.size();
  const double q = std::pow(lambdas[n - 1] / lambdas[n - 2], 2);
  r.estimate = (q * r.values[n - 1] - r.values[n - 2]) / (q - 1.0);
  // Gaps already at roundoff level count as converged.
  const double floor = 1e-12 * r.reference;
  r.monotone = true;
  for (std::size_t i = 1; i < n; ++i) {
    const double prev = std::abs(r.values[i - 1] - r.reference), cur = std::abs(r.values[i] - r.reference);
    if (!(cur < prev || std::max(cur, prev) <= floor)) r.monotone = false;
  }
  return r;
}

inline DiagnosticReport lemma61_report(double s, double delta, const std::vector<double>& lambdas,
                                       double tolerance = 0.02) {
  auto r0 = lemma61_limit(s, delta, 0.0, lambdas);
  auto r1 = lemma61_limit(s, delta, std::numbers::pi / 3.0, lambdas);
  DiagnosticReport rep;
  rep.name = "lemma61_limit";
  rep.params = {{"s", s}, {"delta", delta}, {"lambdas", lambdas}, {"tolerance", tolerance}};
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    rep.samples.push_back({{"lambda", lambdas[i]}, {"value", r0.values[i]}, {"value_alpha_pi_3", r1.values[i]}});
  rep.values["estimate"] = r0.estimate;
  rep.values["reference"] = r0.reference;
  rep.values["relative_error"] = r0.relative_error();
  const double spread = std::abs(r0.values.back() - r1.values.back()) / r0.values.back();
  rep.values["alpha_spread"] = spread;
  if (!r0.monotone) rep.flags.push_back("non-monotone approach to the reference");
  rep.pass = r0.monotone && r0.relative_error() < tolerance && spread < 0.005;
  rep.verdict = rep.pass ? "converges to ||phi||/sqrt(2)" : "no convergence within tolerance";
  return rep;
}

struct LowBoundSample {
  double lambda = 0.0;
  std::vector<double> l2, linf;  ///< max over t of ||d^k u_low||, k = 0..k_max
  double drift = 0.0;            ///< ||u_low(t_end) - u_low(0)||_{L^2}
};

/// Norms of the low part for one lambda, maximized over the stored times.
inline LowBoundSample low_bounds(const ApproxSolutionState& st, int k_max) {
  LowBoundSample out;
  out.lambda = st.params().lambda;
  out.l2.assign(static_cast<std::size_t>(k_max + 1), 0.0);
  out.linf = out.l2;
  const auto& ts = st.u_low_traj().times;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto u = st.low0() + st.u_low_traj().snapshots[i];
    for (int k = 0; k <= k_max; ++k) {
      const auto D = integer_derivative(u, k);
      out.l2[k] = std::max(out.l2[k], D.l2_norm());
      out.linf[k] = std::max(out.linf[k], from_spectral(resample(D, 2 * D.grid().points())).max_abs());
    }
  }
  out.drift = st.u_low_traj().snapshots.back().l2_norm();
  return out;
}

/// Fitted lambda exponents of the low-part norms against the predicted
///   L^2:  -(2-delta)/2 - k(4+delta),   L^inf: -3 - k(4+delta),   drift: -15 - 3 delta.
inline DiagnosticReport lowbound_check(const CounterexampleParams& cp, const EquationParams& p, int k_max,
                                       const std::vector<double>& lambdas = {8.0, 16.0, 32.0}, double t_end = 1.0) {
  require(k_max >= 0, "lowbound_check: k_max must be non-negative");
  require(lambdas.size() >= 2, "lowbound_check: need at least two lambdas");
  std::vector<LowBoundSample> rows;
  for (double l : lambdas) {
    auto st = evolve_low(cp.with_lambda(l), p, t_end);
    rows.push_back(low_bounds(st, k_max));
  }
  const double d = cp.delta;
  DiagnosticReport rep;
  rep.name = "lowbound_check";
  rep.params = {{"counterexample", cp.to_json()},
                {"equation", {{"sign", p.sign}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}}},
                {"k_max", k_max},
                {"lambdas", lambdas},
                {"t_end", t_end}};
  for (const auto& r : rows) rep.samples.push_back({{"lambda", r.lambda}, {"L2", r.l2}, {"Linf", r.linf}, {"drift", r.drift}});
  bool ok = true;
  auto check = [&](const std::string& label, const std::vector<double>& y, double predicted, double tol) {
    const double slope = loglog_fit(lambdas, y).slope;
    rep.exponents[label] = slope;
    rep.values[label + "_predicted"] = predicted;
    if (std::abs(slope - predicted) > tol) {
      ok = false;
      rep.flags.push_back(label + ": slope " + std::to_string(slope) + " vs " + std::to_string(predicted));
    }
  };
  for (int k = 0; k <= k_max; ++k) {
    std::vector<double> l2, li;
    for (const auto& r : rows) {
      l2.push_back(r.l2[k]);
      li.push_back(r.linf[k]);
    }
    const double tol = 0.3 * (1.0 + k);
    check("L2_k" + std::to_string(k), l2, -(2.0 - d) / 2.0 - k * (4.0 + d), tol);
    check("Linf_k" + std::to_string(k), li, -3.0 - k * (4.0 + d), tol);
  }
  std::vector<double> drift;
  for (const auto& r : rows) drift.push_back(r.drift);
  check("drift", drift, -15.0 - 3.0 * d, 1.0);
  rep.pass = ok;
  rep.verdict = ok ? "all power laws within tolerance" : "some power laws outside tolerance";
  return rep;
}

struct ApproxErrorCurve {
  double lambda = 0.0;
  std::vector<double> times, error_hs, error_l2;
};

/// t -> ||u(t) - u_ap(t)|| for the solution from the constructed data.
inline ApproxErrorCurve approx_error_curve(const CounterexampleParams& cp, const EquationParams& p,
                                           const std::vector<double>& times, double dt_max = kCarrierStep) {
  require(!times.empty(), "approx_error_curve: no times");
  auto st = evolve_low(cp, p, std::max(times.back(), 1e-3));
  auto sol = solve_banded(build_initial_banded(cp, st.grid()), p, times, dt_max);
  ApproxErrorCurve c;
  c.lambda = cp.lambda;
  c.times = times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    auto w = sol[i] - st.u_ap(times[i]);
    c.error_hs.push_back(w.sobolev(cp.s));
    c.error_l2.push_back(w.l2_norm());
  }
  return c;
}

struct SeparationCurve {
  double lambda = 0.0;
  std::vector<double> times, separation, envelope;
  double initial_separation = 0.0;
  /// max over the sampled times of ||u(t)||_{H^s} and ||u(t)||_{L^inf} for omega = +1, -1.
  double hs_plus = 0.0, hs_minus = 0.0, sup_plus = 0.0, sup_minus = 0.0;
  /// ||u(t)||_{L^2} at the sampled times for omega = +1, -1.
  std::vector<double> l2_plus, l2_minus;
};

/// Envelope 2 Lambda c |sin(nu t)| with c = ||phi|| / sqrt(2).
inline double separation_envelope(const CounterexampleParams& cp, const EquationParams& p, double t) {
  return 2.0 * cp.Lambda_amp * lemma61_reference() * std::abs(std::sin(cp.phase_rate(p) * t));
}

/// H^s distance between the solutions from omega = +1 and omega = -1 data.
inline SeparationCurve separation_curve(const CounterexampleParams& cp_base, const EquationParams& p,
                                        const std::vector<double>& times, double dt_max = kCarrierStep) {
  const auto g = cp_base.carrier_grid();
  const std::vector<int> omegas{1, -1};
  auto runs = parallel_map(omegas, [&](int w) {
    return solve_banded(build_initial_banded(cp_base.with_omega(w), g), p, times, dt_max);
  });
  SeparationCurve c;
  c.lambda = cp_base.lambda;
  c.times = times;
  c.initial_separation = (build_initial_banded(cp_base.with_omega(1), g) -
                          build_initial_banded(cp_base.with_omega(-1), g)).sobolev(cp_base.s);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& up = runs[0][i];
    const auto& um = runs[1][i];
    c.separation.push_back((up - um).sobolev(cp_base.s));
    c.envelope.push_back(separation_envelope(cp_base.with_omega(1), p, times[i]));
    c.hs_plus = std::max(c.hs_plus, up.sobolev(cp_base.s));
    c.hs_minus = std::max(c.hs_minus, um.sobolev(cp_base.s));
    c.sup_plus = std::max(c.sup_plus, up.sup_norm());
    c.sup_minus = std::max(c.sup_minus, um.sup_norm());
    c.l2_plus.push_back(up.l2_norm());
    c.l2_minus.push_back(um.l2_norm());
  }
  return c;
}

/// Separation sweep verdicts: initial separation slope -(2-delta)/2 within
/// 0.1, separation at least half the envelope, separation/t stable within a
/// factor 2 across lambda, ratio to the envelope within [0.8, 1.2] at the
/// largest lambda, and H^s and sup norms without growth in lambda.
inline DiagnosticReport separation_report(const std::vector<SeparationCurve>& curves, const CounterexampleParams& cp,
                                          const EquationParams& p) {
  require(curves.size() >= 2, "separation_report: need at least two lambdas");
  DiagnosticReport rep;
  rep.name = "separation";
  rep.params = {{"counterexample", cp.to_json()},
                {"equation", {{"sign", p.sign}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}}}};
  std::vector<double> lam, init, hs, sup;
  for (const auto& c : curves) {
    lam.push_back(c.lambda);
    init.push_back(c.initial_separation);
    hs.push_back(std::max(c.hs_plus, c.hs_minus));
    sup.push_back(std::max(c.sup_plus, c.sup_minus));
    rep.samples.push_back({{"lambda", c.lambda},
                           {"times", c.times},
                           {"separation", c.separation},
                           {"envelope", c.envelope},
                           {"initial_separation", c.initial_separation},
                           {"hs_plus", c.hs_plus},
                           {"hs_minus", c.hs_minus},
                           {"sup_plus", c.sup_plus},
                           {"sup_minus", c.sup_minus}});
  }
  bool ok = true;
  auto fail = [&](const std::string& why) {
    ok = false;
    rep.flags.push_back(why);
  };
  const double init_slope = loglog_fit(lam, init).slope;
  const double predicted = -(2.0 - cp.delta) / 2.0;
  rep.exponents["initial_separation"] = init_slope;
  rep.values["initial_separation_predicted"] = predicted;
  if (std::abs(init_slope - predicted) > 0.1) fail("initial separation slope off the predicted rate");
  rep.exponents["hs_bound"] = loglog_fit(lam, hs).slope;
  if (rep.exponents["hs_bound"] > 0.1) fail("H^s norms grow with lambda");
  rep.exponents["sup_bound"] = loglog_fit(lam, sup).slope;
  if (rep.exponents["sup_bound"] > 0.1) fail("sup norms grow with lambda");

  const auto& last = curves.back();
  for (std::size_t i = 0; i < last.times.size(); ++i) {
    if (last.times[i] == 0.0) continue;
    const std::string t = std::to_string(last.times[i]);
    double lo = INFINITY, hi = 0.0;
    for (const auto& c : curves) {
      if (c.separation[i] < 0.5 * c.envelope[i]) fail("separation below half the envelope at t=" + t);
      const double slope = c.separation[i] / last.times[i];
      lo = std::min(lo, slope);
      hi = std::max(hi, slope);
    }
    rep.values["c_spread_t" + t] = hi / lo;
    if (hi > 2.0 * lo) fail("separation/t varies by more than a factor 2 at t=" + t);
    const double ratio = last.separation[i] / last.envelope[i];
    rep.values["envelope_ratio_t" + t] = ratio;
    if (ratio < 0.8 || ratio > 1.2) fail("largest-lambda envelope ratio outside [0.8, 1.2] at t=" + t);
  }
  rep.pass = ok;
  rep.verdict = ok ? "separation persists while the data converge" : "separation checks failed";
  return rep;
}

/// Final-time distance to the approximate solution must fall strictly with lambda.
inline DiagnosticReport approx_error_report(const std::vector<ApproxErrorCurve>& curves, const CounterexampleParams& cp,
                                            const EquationParams& p) {
  require(curves.size() >= 2, "approx_error_report: need at least two lambdas");
  DiagnosticReport rep;
  rep.name = "approx_error";
  rep.params = {{"counterexample", cp.to_json()},
                {"equation", {{"sign", p.sign}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}}}};
  std::vector<double> lam, hs, l2;
  for (const auto& c : curves) {
    lam.push_back(c.lambda);
    hs.push_back(c.error_hs.back());
    l2.push_back(c.error_l2.back());
    rep.samples.push_back({{"lambda", c.lambda}, {"times", c.times}, {"error_hs", c.error_hs}, {"error_l2", c.error_l2}});
  }
  rep.exponents["error_hs"] = loglog_fit(lam, hs).slope;
  rep.exponents["error_l2"] = loglog_fit(lam, l2).slope;
  rep.pass = true;
  for (std::size_t i = 1; i < hs.size(); ++i)
    if (!(hs[i] < hs[i - 1])) rep.pass = false;
  if (!rep.pass) rep.flags.push_back("H^s error at the final time not strictly decreasing in lambda");
  rep.verdict = rep.pass ? "u_ap approaches the solution as lambda grows" : "no decrease in lambda";
  return rep;
}

struct ResidualSweep {
  DiagnosticReport report;
  std::vector<ResidualBreakdown> rows;
};

/// Residual of u_ap at time t over a lambda sweep: ||F_1|| below 1e-8, the
/// L^2 slope of F within 0.3 of max(-s-delta, (2-delta)/2 - 2s) and the
/// H^sigma / L^2 ratio slopes within 0.3 of sigma.
inline ResidualSweep residual_sweep(const CounterexampleParams& cp, const EquationParams& p,
                                    const std::vector<double>& lambdas, double t,
                                    const std::vector<double>& sigmas = {1.0, 2.0}) {
  require(lambdas.size() >= 2, "residual_sweep: need at least two lambdas");
  require(t > 0.0, "residual_sweep: t must be positive");
  ResidualSweep out;
  auto& rep = out.report;
  rep.name = "residual";
  rep.params = {{"counterexample", cp.to_json()},
                {"equation", {{"sign", p.sign}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}}},
                {"lambdas", lambdas},
                {"t", t},
                {"sigmas", sigmas}};
  const int samples = std::max(16, static_cast<int>(std::ceil(32.0 * t)));
  std::vector<double> total;
  std::vector<std::vector<double>> ratios(sigmas.size());
  double f1 = 0.0;
  for (double lam : lambdas) {
    const auto st = evolve_low(cp.with_lambda(lam), p, t, samples);
    auto r = residual_F(st, t, p, sigmas);
    f1 = std::max(f1, r.parts[0]);
    total.push_back(r.total);
    for (std::size_t k = 0; k < sigmas.size(); ++k) ratios[k].push_back(r.hs[k].second / r.total);
    rep.samples.push_back({{"lambda", lam}, {"parts", r.parts}, {"total", r.total}, {"mismatch", r.mismatch}});
    out.rows.push_back(std::move(r));
  }
  bool ok = true;
  rep.values["max_F1"] = f1;
  if (!(f1 < 1e-8)) {
    ok = false;
    rep.flags.push_back("low-part residual F1 above 1e-8");
  }
  const double predicted = std::max(-cp.s - cp.delta, (2.0 - cp.delta) / 2.0 - 2.0 * cp.s);
  rep.exponents["F_L2"] = loglog_fit(lambdas, total).slope;
  rep.values["F_L2_predicted"] = predicted;
  if (std::abs(rep.exponents["F_L2"] - predicted) > 0.3) {
    ok = false;
    rep.flags.push_back("L2 residual slope off the predicted rate");
  }
  for (std::size_t k = 0; k < sigmas.size(); ++k) {
    const std::string key = "F_H" + json(sigmas[k]).dump() + "_over_L2";
    rep.exponents[key] = loglog_fit(lambdas, ratios[k]).slope;
    if (std::abs(rep.exponents[key] - sigmas[k]) > 0.3) {
      ok = false;
      rep.flags.push_back(key + " slope differs from sigma");
    }
  }
  rep.pass = ok;
  rep.verdict = ok ? "residual power laws within tolerance" : "residual power laws outside tolerance";
  return out;
}

}  // namespace kdv5
