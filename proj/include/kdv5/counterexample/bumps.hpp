// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Plateau bumps built by mollifying indicators:
//   phi   = 1_[-3/2, 3/2] * rho_{1/2}:  1 on [-1,1], 0 outside [-2,2]
//   phi_w = 1_[-3, 3]     * rho_1:      1 on [-2,2], 0 outside [-4,4]
// so phi_w = 1 on the support of phi and phi * phi_w = phi exactly.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "kdv5/spectral/field.hpp"
#include "kdv5/spectral/smooth.hpp"

namespace kdv5 {

namespace detail {
/// (1_[-a, a] * rho_eps)(x) through the kernel's cumulative mass.
inline double plateau(double x, double a, double eps) {
  return smooth::kernel_cdf((x + a) / eps) - smooth::kernel_cdf((x - a) / eps);
}
}  // namespace detail

inline double bump_phi(double x) {
  if (std::abs(x) <= 1.0) return 1.0;
  if (std::abs(x) >= 2.0) return 0.0;
  return detail::plateau(x, 1.5, 0.5);
}

inline double bump_phi_wide(double x) {
  if (std::abs(x) <= 2.0) return 1.0;
  if (std::abs(x) >= 4.0) return 0.0;
  return detail::plateau(x, 3.0, 1.0);
}

/// Transition layers must carry at least this many nodes per unit of x/scale.
inline constexpr double kBumpNodesPerUnit = 16.0;

namespace detail {
inline void require_bump_resolution(const TorusGrid& g, double scale, double support) {
  require(scale > 0.0, "bump: scale must be positive");
  require(scale / g.spacing() >= kBumpNodesPerUnit, "bump: grid does not resolve the transition layers");
  require(support * scale < 0.5 * g.length(), "bump: support does not fit in the torus");
}
}  // namespace detail

/// phi(x / scale) sampled on the grid.
inline RealField bump_phi(const TorusGrid& g, double scale = 1.0) {
  detail::require_bump_resolution(g, scale, 2.0);
  return RealField::from_function(g, [&](double x) { return bump_phi(x / scale); });
}

inline RealField bump_phi_wide(const TorusGrid& g, double scale = 1.0) {
  detail::require_bump_resolution(g, scale, 4.0);
  return RealField::from_function(g, [&](double x) { return bump_phi_wide(x / scale); });
}

namespace detail {
template <class F>
double squared_norm(F f, double half_width, double plateau_half) {
  using boost::math::quadrature::gauss_kronrod;
  auto sq = [&](double x) { return f(x) * f(x); };
  const double layer = gauss_kronrod<double, 61>::integrate(sq, plateau_half, half_width, 5, 1e-14);
  return 2.0 * (plateau_half + layer);
}
}  // namespace detail

/// ||phi||_{L^2}^2 and ||phi_w||_{L^2}^2 by adaptive quadrature over the layers.
inline double bump_phi_norm_squared() {
  static const double v = detail::squared_norm([](double x) { return bump_phi(x); }, 2.0, 1.0);
  return v;
}

inline double bump_phi_wide_norm_squared() {
  static const double v = detail::squared_norm([](double x) { return bump_phi_wide(x); }, 4.0, 2.0);
  return v;
}

}  // namespace kdv5
