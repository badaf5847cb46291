// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The two-scale data family and its approximate solution:
//   u(0)  = -L w l^{-3} phi_w(x / l^{4+d}) - a phi(x / l^{4+d}) cos(l x),
//   a     = L l^{-(4+d)/2-s},
//   u_ap  = u_low(t) - a phi_l(x) cos(l x + beta(t)),
//   beta  = -sign l^5 t - nu t,   nu = c2 L w,
// where u_low solves the full equation from the low data. On the support of
// phi the low part equals -L w l^{-3}, so nu is the frequency shift that
// u_low d^3 u_hi imposes on the carrier.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdv5/counterexample/banded.hpp"
#include "kdv5/counterexample/bumps.hpp"
#include "kdv5/integrator/solve.hpp"

namespace kdv5 {

struct CounterexampleParams {
  double lambda = 8.0;
  double delta = 1.0;
  double Lambda_amp = 0.1;
  int omega = 1;
  double s = 3.0;
  /// Period in units of the support scale lambda^{4+delta}.
  double length_factor = 16.0;
  /// Envelope grid size of the carrier representation.
  std::size_t envelope_points = 8192;

  void validate() const {
    require(std::isfinite(lambda) && lambda >= 1.0, "CounterexampleParams: lambda must be >= 1");
    require(std::isfinite(s) && s > 0.0, "CounterexampleParams: s must be positive");
    require(std::isfinite(delta) && delta > std::max(0.0, 2.0 - 2.0 * s) && delta < 2.0,
            "CounterexampleParams: delta must lie in (max(0, 2 - 2s), 2)");
    require(std::isfinite(Lambda_amp) && Lambda_amp > 0.0, "CounterexampleParams: Lambda_amp must be positive");
    require(omega == 1 || omega == -1, "CounterexampleParams: omega must be +1 or -1");
    require(length_factor >= 16.0, "CounterexampleParams: period must be at least 16 lambda^{4+delta}");
    require(envelope_points >= 64 && envelope_points % 4 == 0,
            "CounterexampleParams: envelope_points must be a multiple of 4, at least 64");
  }

  /// Support scale lambda^{4+delta}.
  double scale() const { return std::pow(lambda, 4.0 + delta); }
  /// Amplitude a of the high part.
  double hi_amplitude() const { return Lambda_amp * std::pow(lambda, -0.5 * (4.0 + delta) - s); }
  /// Plateau value of the low data, -Lambda omega lambda^{-3}.
  double low_plateau() const { return -Lambda_amp * omega * std::pow(lambda, -3.0); }
  double min_length() const { return length_factor * scale(); }

  /// Carrier shift nu = c2 Lambda omega.
  double phase_rate(const EquationParams& p) const { return p.c2 * Lambda_amp * omega; }
  /// Phase beta(t) of the high part.
  double phase(const EquationParams& p, double t) const {
    return -(p.sign * std::pow(lambda, 5) + phase_rate(p)) * t;
  }

  CarrierGrid carrier_grid(int bands = 2) const {
    validate();
    return CarrierGrid::fit(lambda, min_length(), envelope_points, bands);
  }

  CounterexampleParams with_omega(int w) const {
    auto c = *this;
    c.omega = w;
    return c;
  }
  CounterexampleParams with_lambda(double l) const {
    auto c = *this;
    c.lambda = l;
    return c;
  }

  nlohmann::json to_json() const {
    return {{"lambda", lambda},         {"delta", delta},
            {"Lambda_amp", Lambda_amp}, {"omega", omega},
            {"s", s},                   {"length_factor", length_factor},
            {"envelope_points", envelope_points}};
  }
};

namespace detail {
inline std::vector<cplx> to_complex(const RealField& f) { return {f.samples().begin(), f.samples().end()}; }
}  // namespace detail

/// phi_l and phi_w_l sampled on the envelope grid.
struct EnvelopeProfiles {
  RealField phi, phi_wide;
  EnvelopeProfiles(const CounterexampleParams& cp, const TorusGrid& g)
      : phi(bump_phi(g, cp.scale())), phi_wide(bump_phi_wide(g, cp.scale())) {}
};

/// Low data -Lambda omega lambda^{-3} phi_w_l on the envelope grid.
inline SpectralField low_data(const CounterexampleParams& cp, const CarrierGrid& g) {
  BandedField f(g);
  f.set_envelope(0, detail::to_complex(cp.low_plateau() * bump_phi_wide(g.envelope(), cp.scale())));
  return f.low();
}

/// Band-1 envelope of the high part at phase beta: -(a/2) phi_l e^{i beta}.
inline BandedField hi_part(const CounterexampleParams& cp, const CarrierGrid& g, const RealField& phi, double beta) {
  BandedField f(g);
  std::vector<cplx> e(g.points());
  const cplx coef = -0.5 * cp.hi_amplitude() * std::polar(1.0, beta);
  for (std::size_t j = 0; j < e.size(); ++j) e[j] = coef * phi[j];
  f.set_envelope(1, e);
  return f;
}

/// The initial datum in carrier-envelope form.
inline BandedField build_initial_banded(const CounterexampleParams& cp, const CarrierGrid& g) {
  cp.validate();
  BandedField f = hi_part(cp, g, bump_phi(g.envelope(), cp.scale()), 0.0);
  f.set_low(low_data(cp, g));
  return f;
}

/// The initial datum sampled pointwise on a dense grid.
inline RealField build_initial_data(const CounterexampleParams& cp, const TorusGrid& grid) {
  cp.validate();
  require(grid.length() >= cp.min_length() * (1.0 - 1e-12),
          "build_initial_data: grid shorter than the required multiple of lambda^{4+delta}");
  require(cp.lambda <= grid.max_wavenumber() / 3.0, "build_initial_data: lambda exceeds the Nyquist margin");
  const double sc = cp.scale(), a = cp.hi_amplitude(), low = cp.low_plateau();
  auto phi = bump_phi(grid, sc);
  auto wide = bump_phi_wide(grid, sc);
  std::vector<double> v(grid.points());
  for (std::size_t j = 0; j < v.size(); ++j)
    v[j] = low * wide[j] - a * phi[j] * std::cos(cp.lambda * grid.node(j));
  return RealField(grid, std::move(v));
}

/// Approximate solution data: the numerically evolved low part, stored as
/// offsets from u_low(0) so that its tiny drift keeps full precision.
class ApproxSolutionState {
 public:
  ApproxSolutionState(CounterexampleParams cp, EquationParams p, CarrierGrid grid, SpectralField low0,
                      TrajectoryRecord u_low_traj)
      : params_(cp), eq_(p), grid_(grid), profiles_(cp, grid.envelope()), low0_(std::move(low0)),
        traj_(std::move(u_low_traj)), base_rhs_(rhs_spectral(low0_, p)) {
    require(traj_.times.size() >= 5, "ApproxSolutionState: need at least five stored times");
    require(traj_.snapshots.size() == traj_.times.size(), "ApproxSolutionState: snapshots missing");
  }

  const CounterexampleParams& params() const noexcept { return params_; }
  const EquationParams& equation() const noexcept { return eq_; }
  const CarrierGrid& grid() const noexcept { return grid_; }
  const EnvelopeProfiles& profiles() const noexcept { return profiles_; }
  const SpectralField& low0() const noexcept { return low0_; }
  /// u_low(t_i) - u_low(0) at the stored times.
  const TrajectoryRecord& u_low_traj() const noexcept { return traj_; }
  double t_end() const { return traj_.times.back(); }

  /// u_low(t) - u_low(0) and its time derivative from the quartic Lagrange
  /// interpolant through the five stored times nearest to t.
  std::pair<SpectralField, SpectralField> drift(double t) const {
    const auto& ts = traj_.times;
    require(t >= ts.front() - 1e-12 && t <= ts.back() + 1e-12, "ApproxSolutionState: t outside the trajectory");
    std::size_t i0 = traj_.nearest(t);
    i0 = std::min(i0 >= 2 ? i0 - 2 : 0, ts.size() - 5);
    SpectralField val(grid_.envelope()), der(grid_.envelope());
    for (std::size_t i = i0; i < i0 + 5; ++i) {
      double w = 1.0, dw = 0.0;
      for (std::size_t j = i0; j < i0 + 5; ++j) {
        if (j == i) continue;
        const double inv = 1.0 / (ts[i] - ts[j]);
        dw = dw * (t - ts[j]) * inv + w * inv;
        w *= (t - ts[j]) * inv;
      }
      auto v = val.coefficients(), d = der.coefficients();
      auto c = traj_.snapshots[i].coefficients();
      for (std::size_t n = 0; n < c.size(); ++n) {
        v[n] += w * c[n];
        d[n] += dw * c[n];
      }
    }
    return {val, der};
  }

  SpectralField u_low(double t) const { return low0_ + drift(t).first; }

  /// rhs(u_low(0) + d) evaluated around the base point.
  SpectralField low_rhs(const SpectralField& d) const {
    return base_rhs_ + linear_term(d, eq_.sign) - nonlinear_increment(low0_, d, eq_);
  }

  BandedField low_banded(double t) const {
    BandedField f(grid_);
    f.set_low(u_low(t));
    return f;
  }
  BandedField hi_banded(double t) const { return hi_part(params_, grid_, profiles_.phi, params_.phase(eq_, t)); }
  BandedField u_ap(double t) const { return low_banded(t) + hi_banded(t); }

 private:
  CounterexampleParams params_;
  EquationParams eq_;
  CarrierGrid grid_;
  EnvelopeProfiles profiles_;
  SpectralField low0_;
  TrajectoryRecord traj_;
  SpectralField base_rhs_;
};

/// Evolve the low data over [0, t_end] and store offsets at `samples` + 1
/// uniform times.
inline ApproxSolutionState evolve_low(const CounterexampleParams& cp, const EquationParams& p, double t_end = 1.0,
                                      int samples = 64, int substeps = 4) {
  cp.validate();
  p.validate();
  require(samples >= 4 && substeps >= 1, "evolve_low: need at least four samples and one substep");
  const auto g = cp.carrier_grid();
  auto low0 = low_data(cp, g);
  OffsetProblem problem(low0, p);
  SolverConfig cfg;
  cfg.t_end = t_end;
  cfg.dt = t_end / (samples * substeps);
  cfg.record_every = substeps;
  cfg.keep_snapshots = true;
  auto traj = run_problem<OffsetProblem, SpectralField>(problem, State(g.envelope().modes()), cfg, {},
                                                        [&](const State& s) { return SpectralField(g.envelope(), s); });
  if (traj.aborted) throw NumericalFailure("evolve_low: " + traj.message);
  return ApproxSolutionState(cp, p, g, std::move(low0), std::move(traj));
}

/// u_ap at time t sampled on a dense grid of the carrier period.
inline RealField u_ap_eval(const ApproxSolutionState& st, double t, std::size_t dense_points) {
  return st.u_ap(t).to_dense(dense_points);
}

struct ResidualBreakdown {
  double t = 0.0;
  /// L^2 norms of F_1..F_6.
  std::array<double, 6> parts{};
  /// ||F||_{L^2} with F evaluated directly from the equation.
  double total = 0.0;
  /// ||F_1 + ... + F_6||_{L^2}.
  double sum = 0.0;
  /// ||F_direct - sum F_i||_{L^2}.
  double mismatch = 0.0;
  std::vector<std::pair<double, double>> hs;  ///< (sigma, ||F||_{H^sigma})

  double part_sum() const {
    double a = 0.0;
    for (double v : parts) a += v;
    return a;
  }
};

namespace detail {
inline BandedField band1(const CarrierGrid& g, const std::vector<cplx>& env) {
  BandedField f(g);
  f.set_envelope(1, env);
  return f;
}
}  // namespace detail

/// Residual F = (d_t + sign d^5) u_ap + N(u_ap) and its six-part split:
///   F1  the low-part equation residual,
///   F2  nonlinear terms with at least two high factors,
///   F3  the commutator of sign d^5 with phi_l acting on the carrier,
///   F4  the carrier equation with u_low frozen in place of its plateau value,
///   F5  the lower commutator terms of c2 u_low d^3 u_hi,
///   F6  nonlinear terms with exactly one high factor other than c2 u_low d^3 u_hi.
inline ResidualBreakdown residual_F(const ApproxSolutionState& st, double t, const EquationParams& p,
                                    const std::vector<double>& sigmas = {}) {
  require(p.sign == st.equation().sign && p.c0 == st.equation().c0 && p.c1 == st.equation().c1 &&
              p.c2 == st.equation().c2,
          "residual_F: equation differs from the one u_low was evolved with");
  const auto& cp = st.params();
  const auto& g = st.grid();
  const double lam = cp.lambda, a = cp.hi_amplitude(), beta = cp.phase(p, t);
  const double beta_dot = -(p.sign * std::pow(lam, 5) + cp.phase_rate(p));
  const cplx carrier = std::polar(1.0, beta);
  const cplx il(0.0, lam);
  const std::size_t n = g.points();

  auto [d, d_dot] = st.drift(t);
  BandedField U = st.low_banded(t);
  BandedField H = st.hi_banded(t);

  // F1 = d_t u_low - rhs(u_low).
  BandedField F1(g);
  F1.set_low(d_dot - st.low_rhs(d));

  // Derivatives of phi_l on the envelope grid.
  std::vector<RealField> dphi{st.profiles().phi};
  for (int k = 1; k <= 5; ++k) dphi.push_back(integer_derivative(st.profiles().phi, k));
  const auto low_samples = U.envelope(0);

  // F3: -a sign sum_{j>=1} C(5,j) d^j phi d^{5-j} cos(Theta); band-1 envelope of
  // d^{m} cos(Theta) is (i lambda)^m e^{i beta} / 2.
  static constexpr std::array<double, 6> binom{1, 5, 10, 10, 5, 1};
  std::vector<cplx> e3(n), e4(n), e5(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc = 0.0;
    for (int k = 1; k <= 5; ++k) acc += binom[k] * dphi[k][j] * std::pow(il, 5 - k);
    e3[j] = -a * p.sign * 0.5 * carrier * acc;
    // F4: -a phi c2 lambda^3 (u_low - plateau) sin(Theta); band-1 envelope of sin is e^{i beta}/(2i).
    const double excess = low_samples[j].real() - cp.low_plateau();
    e4[j] = -a * dphi[0][j] * p.c2 * std::pow(lam, 3) * excess * carrier / cplx(0.0, 2.0);
    // F5: -c2 a u_low (3 phi' d^2 cos + 3 phi'' d cos + phi''' cos).
    const cplx inner = 3.0 * dphi[1][j] * il * il + 3.0 * dphi[2][j] * il + dphi[3][j];
    e5[j] = -p.c2 * a * low_samples[j].real() * 0.5 * carrier * inner;
  }
  BandedField F3 = detail::band1(g, e3), F4 = detail::band1(g, e4), F5 = detail::band1(g, e5);

  // F2 and F6 from band products of the low and high jets.
  BandedJet JU(U), JH(H);
  const int M = g.bands();
  BandSamples f2(M, n), f6(M, n);
  f2.axpy(p.c1, multiply(JH.ux, JH.uxx, M));
  f2.axpy(p.c2, multiply(JH.u, JH.uxxx, M));
  f6.axpy(p.c2, multiply(JH.u, JU.uxxx, M));
  f6.axpy(p.c1, multiply(JH.ux, JU.uxx, M));
  f6.axpy(p.c1, multiply(JH.uxx, JU.ux, M));
  if (p.c0 != 0.0) {
    const auto UU = multiply(JU.u, JU.u, 2 * M), UH = multiply(JU.u, JH.u, 2 * M), HH = multiply(JH.u, JH.u, 2 * M);
    f6.axpy(p.c0, multiply(UU, JH.ux, M));
    f6.axpy(2.0 * p.c0, multiply(UH, JU.ux, M));
    f2.axpy(2.0 * p.c0, multiply(UH, JH.ux, M));
    f2.axpy(p.c0, multiply(HH, JU.ux, M));
    f2.axpy(p.c0, multiply(HH, JH.ux, M));
  }
  BandedField F2 = f2.to_field(g), F6 = f6.to_field(g);

  // Direct evaluation: d_t u_ap + sign d^5 u_ap + N(u_ap).
  BandedField uap = U + H;
  BandedField direct = static_cast<double>(p.sign) * uap.derivative(5) + nonlinear_term(uap, p);
  BandedField dt_part(g);
  dt_part.set_low(d_dot);
  dt_part += beta_dot * [&] {
    // d_t of the band-1 envelope multiplies it by i beta'.
    BandedField h = H;
    for (auto& v : h.band(1)) v *= cplx(0.0, 1.0);
    return h;
  }();
  direct += dt_part;

  const std::array<const BandedField*, 6> parts{&F1, &F2, &F3, &F4, &F5, &F6};
  BandedField sum(g);
  ResidualBreakdown r;
  r.t = t;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    r.parts[i] = parts[i]->l2_norm();
    sum += *parts[i];
  }
  r.total = direct.l2_norm();
  r.sum = sum.l2_norm();
  r.mismatch = (direct - sum).l2_norm();
  for (double sg : sigmas) r.hs.emplace_back(sg, direct.sobolev(sg));
  return r;
}

}  // namespace kdv5
