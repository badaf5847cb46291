// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Measured ratios for the space-time estimates of the linear and nonlinear
// flows. All of them are line estimates, so inputs must stay away from the
// torus boundary over the horizon; a boundary-energy detector marks runs
// where periodic wrap-around could contaminate the measurement.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kdv5/analysis/fit.hpp"
#include "kdv5/analysis/norms.hpp"
#include "kdv5/analysis/report.hpp"
#include "kdv5/integrator/solve.hpp"
#include "kdv5/spectral/smooth.hpp"

namespace kdv5 {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class StrichartzTriple {
 public:
  StrichartzTriple(double alpha, double q, double r) : alpha_(alpha), q_(q), r_(r) {
    require(alpha >= 0.0, "StrichartzTriple: alpha must be non-negative");
    require(q >= 2.0 && r >= 2.0, "StrichartzTriple: q and r must lie in [2, inf]");
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    require(std::abs(-alpha + 5.0 * inv_q + inv_r - 0.5) < 1e-12,
            "StrichartzTriple: -alpha + 5/q + 1/r must equal 1/2");
    require(alpha <= 3.0 * inv_q + 1e-12, "StrichartzTriple: alpha must not exceed 3/q");
  }
  double alpha() const noexcept { return alpha_; }
  double q() const noexcept { return q_; }
  double r() const noexcept { return r_; }

 private:
  double alpha_, q_, r_;
};

/// Fraction of the total energy located in the outer `edge` fraction of the torus.
inline double boundary_energy_fraction(const RealField& u, double edge = 0.1) {
  const double cut = (0.5 - edge) * u.grid().length();
  double total = 0.0, outer = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double e = u[j] * u[j];
    total += e;
    if (std::abs(u.grid().node(j)) > cut) outer += e;
  }
  return total > 0.0 ? outer / total : 0.0;
}

inline constexpr double kWrapTolerance = 1e-8;

/// L^r norm on the grid refined `refine` times (r = inf gives the sup).
inline double space_norm(const SpectralField& F, double r, std::size_t refine = 4) {
  if (r == 2.0) return F.l2_norm();
  const auto f = from_spectral(resample(F, refine * F.grid().points()));
  if (std::isinf(r)) return f.max_abs();
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) acc += std::pow(std::abs(f[j]), r);
  return std::pow(acc * f.grid().spacing(), 1.0 / r);
}

struct MeasuredRatio {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool valid = true;  ///< false when wrap-around was detected
  double boundary_energy = 0.0;
};

/// ||D^alpha e^{-t sign d_x^5} u0||_{L^q_t([0,T]) L^r_x} / ||u0||_{L^2} for several
/// triples at once, sampling the exact linear flow at `time_samples`+1 uniform times.
inline std::vector<MeasuredRatio> strichartz_ratios(const RealField& u0, const std::vector<StrichartzTriple>& triples,
                                                    double T, int time_samples = 400, int sign = 1) {
  require(T > 0.0 && time_samples >= 2, "strichartz_ratio: need T > 0 and at least two time samples");
  const auto F0 = to_spectral(u0);
  std::vector<double> times(time_samples + 1);
  std::vector<std::vector<double>> series(triples.size(), std::vector<double>(times.size()));
  double boundary = 0.0;
  for (int i = 0; i <= time_samples; ++i) {
    const double t = T * i / time_samples;
    times[i] = t;
    const auto Ft = linear_propagator(F0, t, sign);
    if (i == time_samples || i % 16 == 0) boundary = std::max(boundary, boundary_energy_fraction(from_spectral(Ft)));
    for (std::size_t k = 0; k < triples.size(); ++k) {
      const auto& tr = triples[k];
      const auto G = tr.alpha() == 0.0 ? Ft : frac_derivative(Ft, tr.alpha(), Flavor::homogeneous);
      series[k][i] = space_norm(G, tr.r());
    }
  }
  const double l2 = F0.l2_norm();
  std::vector<MeasuredRatio> out;
  for (std::size_t k = 0; k < triples.size(); ++k) {
    MeasuredRatio m;
    m.lhs = time_norm(times, series[k], triples[k].q());
    m.rhs = l2;
    m.ratio = l2 > 0.0 ? m.lhs / l2 : 0.0;
    m.boundary_energy = boundary;
    m.valid = boundary <= kWrapTolerance;
    out.push_back(m);
  }
  return out;
}

inline MeasuredRatio strichartz_ratio(const RealField& u0, const StrichartzTriple& triple, double T,
                                      int time_samples = 400, int sign = 1) {
  return strichartz_ratios(u0, {triple}, T, time_samples, sign).front();
}

/// Smooth window phi with phi' >= 0, phi' = 1 on [a, b] and phi' = 0 outside [a-1, b+1].
struct Window {
  double a = 0.0;
  double b = 1.0;
  RealField phi;
  RealField phi_prime;
};

inline Window make_window(const TorusGrid& g, double a, double b) {
  require(b > a, "make_window: empty interval");
  require(a - 1.0 > -0.5 * g.length() && b + 1.0 < 0.5 * g.length(), "make_window: window leaves the torus");
  auto rate = [&](double x) {
    if (x < a) return smooth::smooth_step(x - (a - 1.0));
    if (x > b) return 1.0 - smooth::smooth_step(x - b);
    return 1.0;
  };
  auto rp = RealField::from_function(g, rate);
  // Running trapezoid integral of phi' from the left edge of the torus.
  std::vector<double> acc(g.points(), 0.0);
  for (std::size_t j = 1; j < g.points(); ++j) acc[j] = acc[j - 1] + 0.5 * g.spacing() * (rp[j] + rp[j - 1]);
  return {a, b, RealField(g, std::move(acc)), std::move(rp)};
}

struct DiagnosticParams {
  double eta = 0.25;
  double chop_alpha = 0.0;
  Window window;
  int ensemble_size = 100;
  std::uint64_t seed = 1;

  void validate() const {
    require(eta > 0.0, "DiagnosticParams: eta must be positive");
    require(chop_alpha >= 0.0, "DiagnosticParams: chop_alpha must be non-negative");
    require(ensemble_size >= 1, "DiagnosticParams: ensemble_size must be positive");
    for (std::size_t j = 0; j < window.phi_prime.size(); ++j)
      require(window.phi_prime[j] >= 0.0, "DiagnosticParams: window derivative must be non-negative");
  }
};

inline DiagnosticParams default_diagnostics(const TorusGrid& g) {
  return {0.25, 0.0, make_window(g, 0.0, 1.0), 100, 1};
}

/// Maximal-function estimate: (sum_j sup_{t <= T, x in [j, j+1)} |u|^2)^{1/2}
/// against ||u0||_{H^{5/4+eta}}.
inline MeasuredRatio maximal_check(const RealField& u0, const DiagnosticParams& d, double T, int time_samples = 400,
                                   int sign = 1) {
  d.validate();
  const auto F0 = to_spectral(u0);
  const TorusGrid& g = u0.grid();
  const std::size_t refine = 4;
  const TorusGrid fine = g.refined(refine * g.points());
  const double left = -0.5 * g.length();
  const std::size_t cells = static_cast<std::size_t>(std::ceil(g.length()));
  std::vector<double> cell_sup(cells, 0.0);
  double boundary = 0.0;
  for (int i = 0; i <= time_samples; ++i) {
    const double t = T * i / time_samples;
    const auto Ft = linear_propagator(F0, t, sign);
    const auto f = from_spectral(resample(Ft, fine.points()));
    if (i == time_samples || i % 16 == 0) boundary = std::max(boundary, boundary_energy_fraction(f));
    for (std::size_t j = 0; j < f.size(); ++j) {
      const std::size_t c = std::min(cells - 1, static_cast<std::size_t>(std::floor(fine.node(j) - left)));
      cell_sup[c] = std::max(cell_sup[c], std::abs(f[j]));
    }
  }
  double acc = 0.0;
  for (double v : cell_sup) acc += v * v;
  MeasuredRatio m;
  m.lhs = std::sqrt(acc);
  m.rhs = sobolev_norm(F0, Hs(1.25 + d.eta));
  m.ratio = m.rhs > 0.0 ? m.lhs / m.rhs : 0.0;
  m.boundary_energy = boundary;
  m.valid = boundary <= kWrapTolerance;
  return m;
}

/// Probes for the nonlinear diagnostics: ||d_x^3 u||_inf, ||J^s u||, ||J^{s-1} N(u)||,
/// boundary energy and the local-smoothing integrands on the window.
inline std::vector<Probe<SpectralField>> smoothing_probes(const EquationParams& p, double s, const Window& w) {
  auto on_window = [w](const RealField& f, bool plateau_only) {
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double x = f.grid().node(j);
      const double weight = plateau_only ? ((x >= w.a && x < w.b) ? 1.0 : 0.0) : w.phi_prime[j];
      acc += weight * f[j] * f[j];
    }
    return acc * f.grid().spacing();
  };
  return {
      {"d3_sup", [](const SpectralField& F) { return derivative_sup(F, 3); }},
      {"Js", [s](const SpectralField& F) { return sobolev_norm(F, Hs(s)); }},
      {"JsF", [p, s](const SpectralField& F) { return sobolev_norm(nonlinear_term(F, p), Hs(s - 1.0)); }},
      {"boundary", [](const SpectralField& F) { return boundary_energy_fraction(from_spectral(F)); }},
      {"tail", [](const SpectralField& F) { return tail_energy_fraction(F); }},
      {"smooth4", [s, on_window](const SpectralField& F) {
         auto G = apply_even_symbol(F, [s](double k) { return std::pow(std::abs(k), s + 2.0); });
         return on_window(from_spectral(G), true);
       }},
      {"smooth3", [s, on_window](const SpectralField& F) {
         auto G = integer_derivative(frac_derivative(F, s - 2.0, Flavor::homogeneous), 3);
         return on_window(from_spectral(G), false);
       }},
  };
}

namespace detail {
inline bool trajectory_clean(const TrajectoryRecord& tr, DiagnosticReport& rep) {
  bool ok = true;
  for (double b : tr.at("boundary"))
    if (b > kWrapTolerance) ok = false;
  if (!ok) rep.flags.push_back("wrap-around: boundary energy above tolerance");
  for (double t : tr.at("tail"))
    if (t > kResolutionTailThreshold) {
      rep.flags.push_back("under-resolved snapshots");
      ok = false;
      break;
    }
  return ok;
}
}  // namespace detail

/// Local smoothing: int_0^T int_I |D^{s-2} d_x^4 u|^2 against
/// (1 + ||d_x^3 u||_{L^1 L^inf} + sup ||J^s u||^2) sup ||J^s u||^2, plus the
/// one-derivative form int int |D^{s-2} d_x^3 u|^2 phi'. Needs smoothing_probes series.
inline DiagnosticReport local_smoothing_check(const TrajectoryRecord& tr, const DiagnosticParams& d, double s) {
  d.validate();
  DiagnosticReport rep;
  rep.name = "local_smoothing";
  rep.params = {{"s", s}, {"window", {d.window.a, d.window.b}}};
  const auto& t = tr.times;
  const double lhs4 = trapezoid(t, tr.at("smooth4"));
  const double lhs3 = trapezoid(t, tr.at("smooth3"));
  const double d3 = trapezoid(t, tr.at("d3_sup"));
  const double js = time_norm(t, tr.at("Js"), kInfinity);
  const double rhs = (1.0 + d3 + js * js) * js * js;
  const bool clean = detail::trajectory_clean(tr, rep);
  rep.values = {{"lhs", lhs4}, {"lhs_phi_prime", lhs3}, {"rhs", rhs}};
  if (rhs == 0.0) {
    rep.values["ratio"] = 0.0;
    rep.values["ratio_phi_prime"] = 0.0;
    rep.pass = true;
    rep.verdict = "vacuous pass (zero solution)";
    return rep;
  }
  rep.values["ratio"] = lhs4 / rhs;
  rep.values["ratio_phi_prime"] = lhs3 / rhs;
  rep.pass = clean && std::isfinite(lhs4 / rhs);
  rep.verdict = rep.pass ? "finite ratio" : "invalid measurement";
  return rep;
}

/// ||d_x^3 u||_{L^1_T L^inf} against ||J^s u||_{L^inf L^2} + ||J^{s-1} F||_{L^2_T L^2}.
inline DiagnosticReport refined_strichartz_check(const TrajectoryRecord& tr, const DiagnosticParams& d, double s) {
  d.validate();
  require(s > 2.5, "refined_strichartz_check: needs s > 5/2");
  DiagnosticReport rep;
  rep.name = "refined_strichartz";
  rep.params = {{"s", s}, {"chop_alpha", d.chop_alpha}};
  const auto& t = tr.times;
  const double lhs = trapezoid(t, tr.at("d3_sup"));
  const double rhs = time_norm(t, tr.at("Js"), kInfinity) + time_norm(t, tr.at("JsF"), 2.0);
  const bool clean = detail::trajectory_clean(tr, rep);
  rep.values = {{"lhs", lhs}, {"rhs", rhs}};
  if (rhs == 0.0) {
    rep.values["ratio"] = 0.0;
    rep.pass = true;
    rep.verdict = "vacuous pass (zero solution)";
    return rep;
  }
  rep.values["ratio"] = lhs / rhs;
  rep.pass = clean && std::isfinite(lhs / rhs);
  rep.verdict = rep.pass ? "finite ratio" : "invalid measurement";
  return rep;
}

}  // namespace kdv5
