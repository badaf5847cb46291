// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Smooth compactly supported building blocks: the standard bump kernel,
// its cumulative integral, and a C-infinity cutoff equal to 1 on [-1,1].

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace kdv5::smooth {

/// exp(-1/(1-x^2)) on (-1,1), zero elsewhere (unnormalized).
inline double raw_bump(double x) {
  const double q = 1.0 - x * x;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

namespace detail {
inline double integrate(double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(raw_bump, a, b, 5, 1e-14);
}
}  // namespace detail

/// 1 / integral of raw_bump over [-1,1].
inline double bump_normalization() {
  static const double c = 1.0 / detail::integrate(-1.0, 1.0);
  return c;
}

/// Unit-mass kernel rho(x) = c exp(-1/(1-x^2)) supported on [-1,1].
inline double kernel(double x) { return bump_normalization() * raw_bump(x); }

/// Cumulative mass of the unit kernel, integral of rho over (-inf, z].
inline double kernel_cdf(double z) {
  if (z <= -1.0) return 0.0;
  if (z >= 1.0) return 1.0;
  // Integrate over the shorter side for accuracy near both ends.
  if (z <= 0.0) return bump_normalization() * detail::integrate(-1.0, z);
  return 1.0 - bump_normalization() * detail::integrate(z, 1.0);
}

/// C-infinity step: 0 for x <= 0, 1 for x >= 1.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

/// C-infinity even cutoff: 1 on [-1,1], 0 outside [-2,2].
inline double cutoff(double x) { return 1.0 - smooth_step(std::abs(x) - 1.0); }

}  // namespace kdv5::smooth
