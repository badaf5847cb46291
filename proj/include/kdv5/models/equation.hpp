// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The fifth-order KdV family
//   u_t + sign u_5x + c0 u^2 u_x + c1 u_x u_xx + c2 u u_xxx = 0.
// Products are evaluated on a twice-refined grid from inputs truncated to
// |n| <= N/3, which makes both the quadratic and the cubic terms alias free.

#include <cmath>
#include <string>
#include <vector>

#include "kdv5/spectral/operators.hpp"

namespace kdv5 {

struct EquationParams {
  int sign = 1;
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  /// Integrable member of the hierarchy. It conserves the three Hamiltonians of
  /// hamiltonian.hpp; see README for the sign convention.
  static EquationParams integrable() { return {-1, -30.0, -20.0, -10.0}; }
  /// A non-integrable member with c0 = 0.
  static EquationParams general() { return {1, 0.0, 10.0, 10.0}; }
  static EquationParams linear(int sign = 1) { return {sign, 0.0, 0.0, 0.0}; }

  bool is_linear() const noexcept { return c0 == 0.0 && c1 == 0.0 && c2 == 0.0; }

  void validate() const {
    require(sign == 1 || sign == -1, "EquationParams: sign must be +1 or -1");
    require(std::isfinite(c0) && std::isfinite(c1) && std::isfinite(c2),
            "EquationParams: coefficients must be finite");
  }
};

/// Relative energy above the dealiasing cutoff beyond which a field is flagged.
inline constexpr double kResolutionTailThreshold = 1e-20;

namespace detail {

inline std::size_t dealias_cutoff(const TorusGrid& g) { return g.points() / 3; }

/// d^order of F (truncated at N/3) sampled on the 2N grid.
inline std::vector<double> padded_derivative(const SpectralField& F, int order) {
  auto D = integer_derivative(truncate(F, dealias_cutoff(F.grid())), order);
  auto P = resample(D, 2 * F.grid().points());
  auto r = from_spectral(P);
  return {r.samples().begin(), r.samples().end()};
}

/// Project samples on the 2N grid back to the N grid, keeping |n| <= N/3.
inline SpectralField from_padded(std::vector<double> samples, const TorusGrid& g) {
  auto P = to_spectral(RealField(g.refined(2 * g.points()), std::move(samples)));
  return truncate(resample(P, g.points()), dealias_cutoff(g));
}

struct Jet {
  std::vector<double> u, ux, uxx, uxxx;
  explicit Jet(const SpectralField& F)
      : u(padded_derivative(F, 0)), ux(padded_derivative(F, 1)), uxx(padded_derivative(F, 2)),
        uxxx(padded_derivative(F, 3)) {}
};

}  // namespace detail

/// Dealiased N(u) = c0 u^2 u_x + c1 u_x u_xx + c2 u u_xxx.
inline SpectralField nonlinear_term(const SpectralField& F, const EquationParams& p) {
  if (p.is_linear()) return SpectralField(F.grid());
  detail::Jet J(F);
  std::vector<double> n(J.u.size());
  for (std::size_t j = 0; j < n.size(); ++j)
    n[j] = p.c0 * J.u[j] * J.u[j] * J.ux[j] + p.c1 * J.ux[j] * J.uxx[j] + p.c2 * J.u[j] * J.uxxx[j];
  return detail::from_padded(std::move(n), F.grid());
}

/// N(u0 + d) - N(u0) expanded in d, so that tiny increments keep full relative precision.
inline SpectralField nonlinear_increment(const SpectralField& U0, const SpectralField& D,
                                         const EquationParams& p) {
  require_same_grid(U0.grid(), D.grid(), "nonlinear_increment");
  if (p.is_linear()) return SpectralField(U0.grid());
  detail::Jet A(U0), B(D);
  std::vector<double> n(A.u.size());
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double quad = p.c1 * (A.ux[j] * B.uxx[j] + B.ux[j] * A.uxx[j] + B.ux[j] * B.uxx[j]) +
                        p.c2 * (A.u[j] * B.uxxx[j] + B.u[j] * A.uxxx[j] + B.u[j] * B.uxxx[j]);
    const double cubic = A.u[j] * A.u[j] * B.ux[j] + (2.0 * A.u[j] * B.u[j] + B.u[j] * B.u[j]) * (A.ux[j] + B.ux[j]);
    n[j] = quad + p.c0 * cubic;
  }
  return detail::from_padded(std::move(n), U0.grid());
}

/// -sign d_x^5 applied spectrally.
inline SpectralField linear_term(SpectralField F, int sign) {
  auto c = F.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n)
    c[n] *= -static_cast<double>(sign) * derivative_symbol(F.wavenumber(n), 5, F.is_nyquist(n));
  return F;
}

inline SpectralField rhs_spectral(const SpectralField& F, const EquationParams& p) {
  return linear_term(F, p.sign) - nonlinear_term(F, p);
}

struct RhsResult {
  RealField value;
  bool underresolved = false;  ///< energy above the dealiasing cutoff exceeds the threshold
};

/// u_t = -sign u_5x - c0 u^2 u_x - c1 u_x u_xx - c2 u u_xxx.
inline RhsResult rhs(const RealField& u, const EquationParams& p) {
  p.validate();
  auto F = to_spectral(u);
  const bool flag = tail_energy_fraction(F) > kResolutionTailThreshold;
  return {from_spectral(rhs_spectral(F, p)), flag};
}

/// L^2 pairing <f, g> = integral of f g, computed from coefficients.
inline double inner(const SpectralField& F, const SpectralField& G) {
  require_same_grid(F.grid(), G.grid(), "inner");
  double acc = 0.0;
  auto a = F.coefficients();
  auto b = G.coefficients();
  for (std::size_t n = 0; n < a.size(); ++n) acc += F.multiplicity(n) * (std::conj(a[n]) * b[n]).real();
  return acc * F.grid().length();
}

struct L2Rate {
  double direct;       ///< integral of u * rhs(u)
  double closed_form;  ///< (c1/2 - c2) integral of u_x^3
};

inline L2Rate l2_drift_rate(const RealField& u, const EquationParams& p) {
  p.validate();
  auto F = to_spectral(u);
  const double direct = inner(F, rhs_spectral(F, p));
  // u_x^3 sampled on a 2N grid integrates exactly for inputs below N/3.
  auto ux = detail::padded_derivative(F, 1);
  double cube = 0.0;
  for (double v : ux) cube += v * v * v;
  cube *= u.grid().length() / static_cast<double>(ux.size());
  return {direct, (0.5 * p.c1 - p.c2) * cube};
}

}  // namespace kdv5
