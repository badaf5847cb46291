// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "kdv5/spectral/operators.hpp"
#include "kdv5/spectral/smooth.hpp"

namespace kdv5 {

struct MollifierSpec {
  double epsilon;

  explicit MollifierSpec(double eps) : epsilon(eps) {
    require(std::isfinite(eps) && eps > 0.0, "MollifierSpec: epsilon must be positive");
  }
  /// rho_eps(x) = rho(x/eps)/eps.
  double kernel(double x) const { return smooth::kernel(x / epsilon) / epsilon; }
};

/// Kernel nodes per half-width below which the sampled kernel is not trusted.
inline constexpr double kMollifierMinNodes = 4.0;

/// Trapezoid mass of rho_eps sampled on the grid before normalization.
inline double sampled_kernel_mass(const TorusGrid& g, const MollifierSpec& m) {
  double acc = 0.0;
  for (std::size_t j = 0; j < g.points(); ++j) acc += m.kernel(g.node(j));
  return acc * g.spacing();
}

/// Periodic convolution with rho_eps, applied spectrally. The sampled kernel is
/// renormalized to unit discrete mass so constants are preserved exactly.
inline RealField mollify(const RealField& f, const MollifierSpec& m) {
  const TorusGrid& g = f.grid();
  if (m.epsilon < kMollifierMinNodes * g.spacing())
    throw InvalidArgument("mollify: epsilon " + std::to_string(m.epsilon) +
                          " is below grid resolution (spacing " + std::to_string(g.spacing()) + ")");
  require(2.0 * m.epsilon < g.length(), "mollify: kernel support exceeds the torus");
  const double mass = sampled_kernel_mass(g, m);
  // Kernel centered at x = 0, which is a grid node.
  auto K = to_spectral(RealField::from_function(g, [&](double x) { return m.kernel(x) / mass; }));
  auto F = to_spectral(f);
  auto c = F.coefficients();
  auto kc = K.coefficients();
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= g.length() * kc[n];
  return from_spectral(F);
}

}  // namespace kdv5
