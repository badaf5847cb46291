// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Fourier multipliers. Odd symbols (odd derivatives, the dispersive phase)
// are taken to vanish on the unmatched Nyquist mode so that results stay real.

#include <cmath>
#include <complex>
#include <cstdlib>

#include "kdv5/spectral/field.hpp"

namespace kdv5 {

enum class Flavor { homogeneous, inhomogeneous };

inline const char* to_string(Flavor f) {
  return f == Flavor::homogeneous ? "homogeneous" : "inhomogeneous";
}

/// Symbol |k|^s (homogeneous D^s, value 0 at k = 0 for s > 0) or (1+k^2)^{s/2} (J^s).
inline double fractional_symbol(double k, double s, Flavor flavor) {
  if (flavor == Flavor::inhomogeneous) return std::pow(1.0 + k * k, 0.5 * s);
  if (k == 0.0) {
    if (s == 0.0) return 1.0;
    require(s > 0.0, "fractional_symbol: homogeneous symbol with s < 0 is singular at k = 0");
    return 0.0;
  }
  return std::pow(std::abs(k), s);
}

/// Multiply every coefficient by a real even symbol w(k).
template <class W>
SpectralField apply_even_symbol(SpectralField F, W&& w) {
  auto c = F.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= w(F.wavenumber(n));
  return F;
}

inline SpectralField frac_derivative(const SpectralField& F, double s, Flavor flavor) {
  require(std::isfinite(s), "frac_derivative: s must be finite");
  if (flavor == Flavor::homogeneous)
    require(s >= 0.0, "frac_derivative: negative s is singular for the homogeneous flavor");
  return apply_even_symbol(F, [&](double k) { return fractional_symbol(k, s, flavor); });
}

inline RealField frac_derivative(const RealField& f, double s, Flavor flavor) {
  return from_spectral(frac_derivative(to_spectral(f), s, flavor));
}

/// (ik)^order as a complex number; zero at Nyquist for odd order.
inline cplx derivative_symbol(double k, int order, bool nyquist = false) {
  if (order == 0) return 1.0;
  if (nyquist && (order % 2 != 0)) return 0.0;
  const double mag = std::pow(k, order);
  switch (order % 4) {
    case 0: return {mag, 0.0};
    case 1: return {0.0, mag};
    case 2: return {-mag, 0.0};
    default: return {0.0, -mag};
  }
}

inline SpectralField integer_derivative(SpectralField F, int order) {
  require(order >= 0, "integer_derivative: order must be non-negative");
  auto c = F.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= derivative_symbol(F.wavenumber(n), order, F.is_nyquist(n));
  return F;
}

inline RealField integer_derivative(const RealField& f, int order) {
  return from_spectral(integer_derivative(to_spectral(f), order));
}

/// Dispersion relation of the linear part: u_t + sign u_5x = 0 gives
/// c_t = -i Omega c with Omega(k) = sign k^5.
inline double dispersion(double k, int sign) { return static_cast<double>(sign) * std::pow(k, 5); }

/// Exact linear flow e^{-t sign d_x^5}.
inline SpectralField linear_propagator(SpectralField F, double t, int sign) {
  require(sign == 1 || sign == -1, "linear_propagator: sign must be +1 or -1");
  auto c = F.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n) {
    if (F.is_nyquist(n)) continue;
    c[n] *= std::polar(1.0, -dispersion(F.wavenumber(n), sign) * t);
  }
  return F;
}

inline RealField linear_propagator(const RealField& u, double t, int sign) {
  return from_spectral(linear_propagator(to_spectral(u), t, sign));
}

/// Zero every coefficient with index above `cutoff_index`.
inline SpectralField truncate(SpectralField F, std::size_t cutoff_index) {
  auto c = F.coefficients();
  for (std::size_t n = cutoff_index + 1; n < c.size(); ++n) c[n] = 0.0;
  return F;
}

/// Fraction of energy carried by indices above `fraction` of the Nyquist index.
inline double tail_energy_fraction(const SpectralField& F, double fraction = 2.0 / 3.0) {
  const double cut = fraction * static_cast<double>(F.grid().nyquist_index());
  double tail = 0.0, total = 0.0;
  auto c = F.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n) {
    const double e = F.multiplicity(n) * std::norm(c[n]);
    total += e;
    if (static_cast<double>(n) > cut) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace kdv5
