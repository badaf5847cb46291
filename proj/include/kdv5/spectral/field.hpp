// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Real fields on a torus in physical (samples) and Fourier (half spectrum)
// representation. Coefficients are referenced to x = 0, i.e.
//   f(x) = sum_n c_n e^{i k_n x},  c_{-n} = conj(c_n),
// and stored for n = 0..N/2.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kdv5/spectral/fft.hpp"
#include "kdv5/spectral/grid.hpp"

namespace kdv5 {

using cplx = std::complex<double>;

class RealField {
 public:
  explicit RealField(TorusGrid grid) : grid_(grid), samples_(grid.points(), 0.0) {}

  RealField(TorusGrid grid, std::vector<double> samples) : grid_(grid), samples_(std::move(samples)) {
    require(samples_.size() == grid_.points(), "RealField: sample count does not match grid");
    for (std::size_t j = 0; j < samples_.size(); ++j) {
      if (!std::isfinite(samples_[j]))
        throw InvalidArgument("RealField: non-finite sample at node " + std::to_string(j));
    }
  }

  template <class F>
  static RealField from_function(const TorusGrid& grid, F&& f) {
    std::vector<double> s(grid.points());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = f(grid.node(j));
    return RealField(grid, std::move(s));
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const double> samples() const noexcept { return samples_; }
  double operator[](std::size_t j) const noexcept { return samples_[j]; }
  std::size_t size() const noexcept { return samples_.size(); }

  /// Trapezoid (spectrally exact for band-limited integrands) integral over the torus.
  double integral() const {
    return grid_.spacing() * std::accumulate(samples_.begin(), samples_.end(), 0.0);
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
  }
  double l2_norm() const {
    double acc = 0.0;
    for (double v : samples_) acc += v * v;
    return std::sqrt(acc * grid_.spacing());
  }

  RealField& operator+=(const RealField& o) {
    require_same_grid(grid_, o.grid_, "RealField +=");
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += o.samples_[j];
    return *this;
  }
  RealField& operator-=(const RealField& o) {
    require_same_grid(grid_, o.grid_, "RealField -=");
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= o.samples_[j];
    return *this;
  }
  RealField& operator*=(double a) {
    for (double& v : samples_) v *= a;
    return *this;
  }
  friend RealField operator+(RealField a, const RealField& b) { return a += b; }
  friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
  friend RealField operator*(double a, RealField b) { return b *= a; }
  friend RealField operator*(RealField b, double a) { return b *= a; }

  /// Pointwise product (no dealiasing; use on adequately padded grids).
  friend RealField hadamard(const RealField& a, const RealField& b) {
    require_same_grid(a.grid_, b.grid_, "hadamard");
    std::vector<double> s(a.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = a.samples_[j] * b.samples_[j];
    return RealField(a.grid_, std::move(s));
  }

  /// Pointwise map.
  template <class F>
  RealField map(F&& f) const {
    std::vector<double> s(samples_.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = f(samples_[j]);
    return RealField(grid_, std::move(s));
  }

 private:
  TorusGrid grid_;
  std::vector<double> samples_;
};

class SpectralField {
 public:
  explicit SpectralField(TorusGrid grid) : grid_(grid), coeffs_(grid.modes()) {}

  /// Half spectrum n = 0..N/2. The zero and Nyquist coefficients are made real.
  SpectralField(TorusGrid grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == grid_.modes(), "SpectralField: coefficient count does not match grid");
    coeffs_.front() = coeffs_.front().real();
    coeffs_.back() = coeffs_.back().real();
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> coefficients() const noexcept { return coeffs_; }
  std::span<cplx> coefficients() noexcept { return coeffs_; }
  std::size_t modes() const noexcept { return coeffs_.size(); }

  /// Coefficient at signed index n in (-N/2, N/2], using Hermitian symmetry.
  cplx coefficient(long n) const {
    const long half = static_cast<long>(grid_.points() / 2);
    require(n > -half && n <= half, "SpectralField: index outside the grid band");
    return n >= 0 ? coeffs_[static_cast<std::size_t>(n)] : std::conj(coeffs_[static_cast<std::size_t>(-n)]);
  }

  /// Wavenumber of stored slot n.
  double wavenumber(std::size_t n) const noexcept { return grid_.fundamental() * static_cast<double>(n); }
  bool is_nyquist(std::size_t n) const noexcept { return n == grid_.nyquist_index(); }
  /// Multiplicity of stored slot n in the full spectrum (1 for 0 and Nyquist, else 2).
  double multiplicity(std::size_t n) const noexcept { return (n == 0 || is_nyquist(n)) ? 1.0 : 2.0; }

  /// sum_n w(k_n) |c_n|^2 over the full spectrum, times length (Plancherel).
  template <class W>
  double weighted_energy(W&& w) const {
    double acc = 0.0;
    for (std::size_t n = 0; n < coeffs_.size(); ++n)
      acc += multiplicity(n) * w(wavenumber(n)) * std::norm(coeffs_[n]);
    return acc * grid_.length();
  }
  double l2_norm() const {
    return std::sqrt(weighted_energy([](double) { return 1.0; }));
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField +=");
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] += o.coeffs_[n];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same_grid(grid_, o.grid_, "SpectralField -=");
    for (std::size_t n = 0; n < coeffs_.size(); ++n) coeffs_[n] -= o.coeffs_[n];
    return *this;
  }
  SpectralField& operator*=(double a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double a, SpectralField b) { return b *= a; }

 private:
  TorusGrid grid_;
  std::vector<cplx> coeffs_;
};

namespace detail {
// e^{-i k_n x_0} with x_0 = -L/2 equals (-1)^n: converts DFT output to x = 0 reference.
inline double node_phase(std::size_t n) { return (n % 2 == 0) ? 1.0 : -1.0; }
}  // namespace detail

inline SpectralField to_spectral(const RealField& f) {
  const TorusGrid& g = f.grid();
  std::vector<cplx> c(g.modes());
  fft::forward_real(f.samples(), c);
  const double inv_n = 1.0 / static_cast<double>(g.points());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= inv_n * detail::node_phase(n);
  return SpectralField(g, std::move(c));
}

inline RealField from_spectral(const SpectralField& F) {
  const TorusGrid& g = F.grid();
  std::vector<cplx> c(F.coefficients().begin(), F.coefficients().end());
  for (std::size_t n = 0; n < c.size(); ++n) c[n] *= detail::node_phase(n);
  std::vector<double> s(g.points());
  fft::inverse_real(c, s);
  for (double v : s) {
    if (!std::isfinite(v)) throw NumericalFailure("from_spectral: non-finite coefficient content");
  }
  return RealField(g, std::move(s));
}

/// Spectral interpolation onto a finer or coarser grid of the same period.
/// Coarsening drops modes above the target Nyquist.
inline SpectralField resample(const SpectralField& F, std::size_t points) {
  const TorusGrid target = F.grid().refined(points);
  std::vector<cplx> c(target.modes(), cplx{});
  const std::size_t keep = std::min(target.modes(), F.modes());
  for (std::size_t n = 0; n < keep; ++n) c[n] = F.coefficients()[n];
  // The stored Nyquist coefficient carries both +-N/2 modes: it splits evenly when
  // refining, and a coarse Nyquist slot collects the real part of both sides.
  if (points > F.grid().points()) c[F.grid().nyquist_index()] *= 0.5;
  if (points < F.grid().points()) c.back() = cplx(2.0 * c.back().real(), 0.0);
  return SpectralField(target, std::move(c));
}

inline RealField resample(const RealField& f, std::size_t points) {
  return from_spectral(resample(to_spectral(f), points));
}

}  // namespace kdv5
