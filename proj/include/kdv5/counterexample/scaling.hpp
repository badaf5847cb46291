// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scaling symmetry of the equation:
//   u_l(t, x) = l^{-2} u(t / l^5, x / l)
// solves the same equation. On a torus of length L the rescaled field lives
// on length l L with identical Fourier coefficients times l^{-2}, so the map
// is exact up to the choice of target grid.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

#include "kdv5/analysis/norms.hpp"
#include "kdv5/analysis/report.hpp"
#include "kdv5/integrator/solve.hpp"

namespace kdv5 {

enum class ScaleDirection { up, down };

namespace detail {
inline double scale_factor(double lam, ScaleDirection dir) {
  require(std::isfinite(lam) && lam > 0.0, "rescale_solution: lambda must be positive");
  return dir == ScaleDirection::up ? lam : 1.0 / lam;
}
}  // namespace detail

/// l^{-2} u(x / l) on the torus of length l L with the same number of points
/// (direction down uses 1/l).
inline SpectralField rescale_solution(const SpectralField& F, double lam, ScaleDirection dir = ScaleDirection::up) {
  const double l = detail::scale_factor(lam, dir);
  const TorusGrid g(l * F.grid().length(), F.grid().points());
  std::vector<cplx> c(F.coefficients().begin(), F.coefficients().end());
  for (auto& v : c) v *= 1.0 / (l * l);
  return SpectralField(g, std::move(c));
}

inline RealField rescale_solution(const RealField& u, double lam, ScaleDirection dir = ScaleDirection::up) {
  return from_spectral(rescale_solution(to_spectral(u), lam, dir));
}

/// The rescaled field evaluated on an arbitrary target grid by summing its
/// Fourier series. The rescaled support (|u| above `tol` max|u|) must fit
/// inside the target period.
inline RealField rescale_solution(const RealField& u, double lam, ScaleDirection dir, const TorusGrid& target,
                                  double tol = 1e-14) {
  const double l = detail::scale_factor(lam, dir);
  const auto& g = u.grid();
  const double peak = u.max_abs();
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (std::abs(u[j]) > tol * peak) {
      lo = std::min(lo, g.node(j));
      hi = std::max(hi, g.node(j));
    }
  if (peak > 0.0)
    require(l * lo > -0.5 * target.length() && l * hi < 0.5 * target.length(),
            "rescale_solution: rescaled support overflows the target grid");
  const auto F = to_spectral(u);
  const auto c = F.coefficients();
  std::vector<double> out(target.points(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = target.node(i) / l;
    // Only points inside the source period carry the field; outside it is zero.
    if (std::abs(x) >= 0.5 * g.length()) continue;
    double acc = c[0].real();
    for (std::size_t n = 1; n + 1 < c.size(); ++n) acc += 2.0 * (c[n] * std::polar(1.0, F.wavenumber(n) * x)).real();
    out[i] = acc / (l * l);
  }
  return RealField(target, std::move(out));
}

/// Rescale every snapshot and the sample times (t -> l^5 t) of a trajectory.
inline TrajectoryRecord rescale_trajectory(const TrajectoryRecord& tr, double lam, ScaleDirection dir = ScaleDirection::up) {
  const double l = detail::scale_factor(lam, dir);
  TrajectoryRecord out;
  out.aborted = tr.aborted;
  out.message = tr.message;
  out.steps = tr.steps;
  for (double t : tr.times) out.times.push_back(std::pow(l, 5) * t);
  for (const auto& s : tr.snapshots) out.snapshots.push_back(rescale_solution(s, lam, dir));
  return out;
}

/// Solve-then-rescale against rescale-then-solve, plus the norm identities
/// ||u_l|| = l^{-3/2} ||u|| and ||D^s u_l|| = l^{-3/2-s} ||D^s u||. The
/// rescaled data go onto an independent target grid with more points.
inline DiagnosticReport scaling_check(const RealField& u0, const EquationParams& p, const std::vector<double>& lambdas,
                                      double T, double dt, double s) {
  require(!lambdas.empty(), "scaling_check: no lambdas");
  DiagnosticReport rep;
  rep.name = "scaling";
  rep.params = {{"equation", {{"sign", p.sign}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}}},
                {"grid", {{"length", u0.grid().length()}, {"points", u0.grid().points()}}},
                {"lambdas", lambdas},
                {"T", T},
                {"dt", dt},
                {"s", s}};
  const auto& g = u0.grid();
  const auto uT = solve_to(to_spectral(u0), p, T, dt);
  double flow = 0.0, ident = 0.0;
  for (double lam : lambdas) {
    require(lam >= 1.0, "scaling_check: lambdas must be >= 1");
    const auto a = from_spectral(rescale_solution(uT, lam));
    const std::size_t factor = std::bit_ceil(static_cast<std::size_t>(std::ceil(lam)));
    const TorusGrid target(lam * g.length(), factor * g.points());
    const auto v0 = rescale_solution(u0, lam, ScaleDirection::up, target);
    const auto b = from_spectral(solve_to(to_spectral(v0), p, std::pow(lam, 5) * T, std::pow(lam, 5) * dt));
    const double diff = (resample(a, target.points()) - b).l2_norm() / std::max(b.l2_norm(), 1e-300);
    const auto v = rescale_solution(u0, lam);
    const double l2_err = std::abs(v.l2_norm() / (std::pow(lam, -1.5) * u0.l2_norm()) - 1.0);
    const double hs_err =
        std::abs(sobolev_norm(v, dotHs(s)) / (std::pow(lam, -1.5 - s) * sobolev_norm(u0, dotHs(s))) - 1.0);
    flow = std::max(flow, diff);
    ident = std::max({ident, l2_err, hs_err});
    rep.samples.push_back({{"lambda", lam}, {"flow_rel_diff", diff}, {"l2_identity_error", l2_err},
                           {"hs_identity_error", hs_err}});
  }
  rep.values["max_flow_rel_diff"] = flow;
  rep.values["max_identity_error"] = ident;
  rep.pass = flow <= 1e-6 && ident <= 1e-10;
  if (flow > 1e-6) rep.flags.push_back("flow does not commute with rescaling");
  if (ident > 1e-10) rep.flags.push_back("norm identities violated");
  rep.verdict = rep.pass ? "scaling symmetry holds" : "scaling checks failed";
  return rep;
}

}  // namespace kdv5
