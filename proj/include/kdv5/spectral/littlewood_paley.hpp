// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Smooth dyadic partition of frequency space:
//   P_1 = chi(k),  P_N = chi(k/N) - chi(2k/N) for N = 2, 4, ...
// with chi the cutoff of smooth.hpp. The multipliers telescope to chi(k/N_max).

#include <bit>
#include <string>
#include <vector>

#include "kdv5/spectral/operators.hpp"
#include "kdv5/spectral/smooth.hpp"

namespace kdv5 {

class LPBand {
 public:
  explicit LPBand(unsigned long center) : center_(center) {
    require(center >= 1 && std::has_single_bit(center),
            "LPBand: center must be a dyadic integer >= 1, got " + std::to_string(center));
  }
  unsigned long center() const noexcept { return center_; }

  double multiplier(double k) const {
    const double n = static_cast<double>(center_);
    if (center_ == 1) return smooth::cutoff(k);
    return smooth::cutoff(k / n) - smooth::cutoff(2.0 * k / n);
  }
  /// Smallest |k| where the multiplier can be nonzero.
  double support_floor() const { return center_ == 1 ? 0.0 : 0.5 * static_cast<double>(center_); }

 private:
  unsigned long center_;
};

struct LPProjection {
  RealField field;
  bool empty_band = false;  ///< band lies above the grid Nyquist; field is zero
};

inline LPProjection lp_project(const RealField& f, const LPBand& band) {
  const TorusGrid& g = f.grid();
  if (band.support_floor() >= g.max_wavenumber()) return {RealField(g), true};
  auto F = apply_even_symbol(to_spectral(f), [&](double k) { return band.multiplier(k); });
  return {from_spectral(F), false};
}

/// Bands 1, 2, 4, ... up to the first center covering the grid Nyquist, so that
/// the projections sum to the identity on the grid.
inline std::vector<LPBand> lp_bands(const TorusGrid& g) {
  std::vector<LPBand> bands;
  unsigned long n = 1;
  bands.emplace_back(n);
  while (static_cast<double>(n) < g.max_wavenumber()) {
    n *= 2;
    bands.emplace_back(n);
  }
  return bands;
}

}  // namespace kdv5
