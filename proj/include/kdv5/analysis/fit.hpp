// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "kdv5/error.hpp"

namespace kdv5 {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = intercept + slope x.
inline LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size() && x.size() >= 2, "fit_line: need at least two matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
  }
  const double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
  require(vx > 0.0, "fit_line: abscissae are all equal");
  LinearFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r2 = vy > 0.0 ? cxy * cxy / (vx * vy) : 1.0;
  return f;
}

/// Fit log y = intercept + slope log x; all values must be positive.
inline LinearFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "loglog_fit: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

/// Trapezoid integral of samples f over increasing abscissae t.
inline double trapezoid(std::span<const double> t, std::span<const double> f) {
  require(t.size() == f.size(), "trapezoid: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return acc;
}

/// L^q norm in time of a sampled non-negative series (q = infinity gives the max).
inline double time_norm(std::span<const double> t, std::span<const double> f, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> p(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) p[i] = std::pow(std::abs(f[i]), q);
  return std::pow(trapezoid(t, p), 1.0 / q);
}

}  // namespace kdv5
