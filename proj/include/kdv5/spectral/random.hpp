// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kdv5/spectral/field.hpp"

namespace kdv5 {

/// Real trigonometric polynomial with lattice modes 0..kmax whose Gaussian
/// amplitudes decay like (1+n)^-decay. Deterministic in the seed.
inline RealField random_trig_field(const TorusGrid& g, int kmax, std::uint64_t seed, double decay = 2.0,
                                   double scale = 1.0) {
  require(kmax >= 1 && static_cast<std::size_t>(kmax) < g.points() / 2, "random_trig_field: kmax out of range");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int n = 0; n <= kmax; ++n) {
    const double w = scale / std::pow(1.0 + n, decay);
    a[n] = w * normal(rng);
    b[n] = w * normal(rng);
  }
  const double k0 = g.fundamental();
  return RealField::from_function(g, [&](double x) {
    double v = a[0];
    for (int n = 1; n <= kmax; ++n) v += a[n] * std::cos(n * k0 * x) + b[n] * std::sin(n * k0 * x);
    return v;
  });
}

}  // namespace kdv5
