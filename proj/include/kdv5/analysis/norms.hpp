// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>

#include "kdv5/spectral/operators.hpp"

namespace kdv5 {

struct NormSpec {
  double s = 0.0;
  Flavor flavor = Flavor::inhomogeneous;
  /// Space exponent for mixed norms: 2 or infinity.
  double space_exponent = 2.0;

  void validate() const {
    require(std::isfinite(s), "NormSpec: s must be finite");
    require(flavor == Flavor::inhomogeneous || s >= 0.0, "NormSpec: homogeneous norms need s >= 0");
    require(space_exponent == 2.0 || std::isinf(space_exponent), "NormSpec: space exponent must be 2 or infinity");
  }
};

inline NormSpec Hs(double s) { return {s, Flavor::inhomogeneous, 2.0}; }
inline NormSpec dotHs(double s) { return {s, Flavor::homogeneous, 2.0}; }

/// Sobolev norm from coefficients (exact for band-limited fields). With an
/// infinite space exponent this is the sup norm of the s-th derivative field.
inline double sobolev_norm(const SpectralField& F, const NormSpec& n) {
  n.validate();
  if (std::isinf(n.space_exponent)) {
    auto G = n.s == 0.0 ? F : frac_derivative(F, n.s, n.flavor);
    return from_spectral(resample(G, 2 * F.grid().points())).max_abs();
  }
  return std::sqrt(F.weighted_energy([&](double k) {
    const double w = fractional_symbol(k, n.s, n.flavor);
    return w * w;
  }));
}

inline double sobolev_norm(const RealField& u, const NormSpec& n) { return sobolev_norm(to_spectral(u), n); }

inline double sup_norm(const SpectralField& F) { return from_spectral(F).max_abs(); }

/// Sup norm of the k-th derivative.
inline double derivative_sup(const SpectralField& F, int k) { return from_spectral(integer_derivative(F, k)).max_abs(); }

}  // namespace kdv5
