// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared helpers for the unit suites: deterministic random fields and
// brute-force reference computations that avoid the library's FFT path.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "kdv5/spectral/field.hpp"

namespace testing {

using kdv5::RealField;
using kdv5::TorusGrid;

/// Real trigonometric polynomial with modes 1..kmax (in lattice units) and
/// amplitudes decaying like n^-decay, plus a mean.
inline RealField random_field(const TorusGrid& g, int kmax, unsigned seed, double decay = 2.0,
                              double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int n = 0; n <= kmax; ++n) {
    const double w = scale / std::pow(1.0 + n, decay);
    a[n] = w * N(rng);
    b[n] = w * N(rng);
  }
  const double k0 = g.fundamental();
  return RealField::from_function(g, [&](double x) {
    double v = a[0];
    for (int n = 1; n <= kmax; ++n) v += a[n] * std::cos(n * k0 * x) + b[n] * std::sin(n * k0 * x);
    return v;
  });
}

/// O(N^2) DFT coefficient c_n = (1/N) sum_j f(x_j) e^{-i k_n x_j}.
inline std::complex<double> naive_coefficient(const RealField& f, long n) {
  const auto& g = f.grid();
  const double k = g.fundamental() * static_cast<double>(n);
  std::complex<double> acc{};
  for (std::size_t j = 0; j < g.points(); ++j) acc += f[j] * std::polar(1.0, -k * g.node(j));
  return acc / static_cast<double>(g.points());
}

inline double max_abs_diff(const RealField& a, const RealField& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double rel_l2_diff(const RealField& a, const RealField& b) {
  return (a - b).l2_norm() / std::max(b.l2_norm(), 1e-300);
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing
