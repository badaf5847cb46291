// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Carrier-envelope representation for fields concentrated near the harmonics
// of a single carrier wavenumber lambda:
//   u(x) = sum_{|m| <= M} A_m(x) e^{i m lambda x},   A_{-m} = conj(A_m),
// with every envelope A_m resolved on one coarse periodic grid. Envelope
// spectra are kept below a quarter of the grid, so quadratic products are
// exact and cubic products alias only into discarded modes. This is a
// Galerkin truncation of the dense Fourier basis: coefficient j of band m is
// the dense coefficient at wavenumber m lambda + kappa_j, with the same x = 0
// phase reference as SpectralField.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "kdv5/integrator/if_rk4.hpp"
#include "kdv5/integrator/solve.hpp"
#include "kdv5/models/equation.hpp"
#include "kdv5/spectral/fft.hpp"

namespace kdv5 {

class CarrierGrid {
 public:
  /// `carrier_index` is lambda in units of the envelope fundamental.
  CarrierGrid(TorusGrid envelope, long carrier_index, int bands = 2)
      : env_(envelope), index_(carrier_index), bands_(bands) {
    require(bands >= 0, "CarrierGrid: band count must be non-negative");
    require(env_.points() % 4 == 0, "CarrierGrid: envelope points must be a multiple of 4");
    require(bands == 0 || carrier_index >= static_cast<long>(env_.points() / 2),
            "CarrierGrid: carrier too low for the envelope band width");
  }

  /// Smallest carrier-compatible period of at least `min_length`.
  static CarrierGrid fit(double lambda, double min_length, std::size_t points, int bands = 2) {
    require(std::isfinite(lambda) && lambda > 0.0, "CarrierGrid: lambda must be positive");
    require(std::isfinite(min_length) && min_length > 0.0, "CarrierGrid: length must be positive");
    const double cycles = std::ceil(min_length * lambda / (2.0 * std::numbers::pi) - 1e-9);
    const double length = 2.0 * std::numbers::pi * cycles / lambda;
    return CarrierGrid(TorusGrid(length, points), static_cast<long>(cycles), bands);
  }

  const TorusGrid& envelope() const noexcept { return env_; }
  std::size_t points() const noexcept { return env_.points(); }
  long carrier_index() const noexcept { return index_; }
  double carrier() const noexcept { return env_.fundamental() * static_cast<double>(index_); }
  int bands() const noexcept { return bands_; }
  double length() const noexcept { return env_.length(); }

  /// Envelope slots with |j| < N/4 are retained.
  bool retained(std::size_t j) const noexcept {
    return std::abs(env_.signed_index(j)) < static_cast<long>(env_.points() / 4);
  }
  double wavenumber(int m, std::size_t j) const noexcept {
    return static_cast<double>(m) * carrier() + env_.wavenumber(j);
  }
  /// Largest retained |k| over all bands.
  double max_wavenumber() const noexcept {
    return static_cast<double>(bands_) * carrier() + env_.fundamental() * static_cast<double>(env_.points() / 4);
  }
  /// Dense index of band m, slot j.
  long dense_index(int m, std::size_t j) const noexcept {
    return static_cast<long>(m) * index_ + env_.signed_index(j);
  }

  bool operator==(const CarrierGrid& o) const noexcept {
    return env_ == o.env_ && index_ == o.index_ && bands_ == o.bands_;
  }

 private:
  TorusGrid env_;
  long index_;
  int bands_;
};

namespace detail {
inline double slot_phase(const TorusGrid& g, std::size_t j) {
  return (g.signed_index(j) % 2 == 0) ? 1.0 : -1.0;
}
}  // namespace detail

/// A real field in carrier-envelope form; band m holds the full envelope
/// spectrum (FFT order, normalized by 1/N) for m = 0..M.
class BandedField {
 public:
  explicit BandedField(CarrierGrid grid)
      : grid_(grid), c_(static_cast<std::size_t>(grid.bands() + 1), std::vector<cplx>(grid.points())) {}

  const CarrierGrid& grid() const noexcept { return grid_; }
  int bands() const noexcept { return grid_.bands(); }
  std::span<cplx> band(int m) { return c_.at(static_cast<std::size_t>(m)); }
  std::span<const cplx> band(int m) const { return c_.at(static_cast<std::size_t>(m)); }

  /// Band-m envelope from its samples on the envelope grid.
  void set_envelope(int m, std::span<const cplx> samples) {
    require(samples.size() == grid_.points(), "BandedField: envelope size mismatch");
    auto b = band(m);
    fft::forward_complex(samples, b);
    const double inv_n = 1.0 / static_cast<double>(grid_.points());
    for (std::size_t j = 0; j < b.size(); ++j) b[j] *= inv_n * detail::slot_phase(grid_.envelope(), j);
    if (m == 0) make_real_envelope(b);
    mask(b);
  }

  /// Envelope samples of band m.
  std::vector<cplx> envelope(int m) const {
    auto b = band(m);
    std::vector<cplx> tmp(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) tmp[j] = b[j] * detail::slot_phase(grid_.envelope(), j);
    std::vector<cplx> out(b.size());
    fft::inverse_complex(tmp, out);
    return out;
  }

  /// Band 0 from a dense field on the envelope grid.
  void set_low(const SpectralField& F) {
    require(F.grid() == grid_.envelope(), "BandedField: low part must live on the envelope grid");
    auto b = band(0);
    const auto c = F.coefficients();
    const std::size_t n = grid_.points();
    for (std::size_t j = 0; j < n; ++j) {
      const long k = grid_.envelope().signed_index(j);
      if (k == static_cast<long>(n / 2)) b[j] = 0.0;
      else b[j] = k >= 0 ? c[static_cast<std::size_t>(k)] : std::conj(c[static_cast<std::size_t>(-k)]);
    }
    mask(b);
  }

  /// Band 0 as a dense field on the envelope grid.
  SpectralField low() const {
    SpectralField F(grid_.envelope());
    auto c = F.coefficients();
    auto b = band(0);
    for (std::size_t n = 0; n + 1 < c.size(); ++n) c[n] = b[n];
    return F;
  }

  /// Sample the field on a dense grid of the same period.
  RealField to_dense(std::size_t points) const {
    const TorusGrid g(grid_.length(), points);
    SpectralField F(g);
    auto c = F.coefficients();
    const long top = static_cast<long>(g.nyquist_index());
    for (int m = 0; m <= bands(); ++m) {
      auto b = band(m);
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j] == cplx{}) continue;
        const long n = grid_.dense_index(m, j);
        // Band 0 carries both signs; keep its non-negative half only.
        if (m == 0 && n < 0) continue;
        require(n < top, "BandedField::to_dense: target grid too coarse for the top band");
        c[static_cast<std::size_t>(n)] += b[j];
      }
    }
    return from_spectral(F);
  }

  /// Sobolev norm; each band m >= 1 also stands for its mirror -m.
  double sobolev(double s, Flavor flavor = Flavor::inhomogeneous) const {
    double acc = 0.0;
    for (int m = 0; m <= bands(); ++m) {
      auto b = band(m);
      const double mult = m == 0 ? 1.0 : 2.0;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[j] == cplx{}) continue;
        const double w = fractional_symbol(grid_.wavenumber(m, j), s, flavor);
        acc += mult * w * w * std::norm(b[j]);
      }
    }
    return std::sqrt(acc * grid_.length());
  }
  double l2_norm() const { return sobolev(0.0); }

  /// max |u| over the envelope nodes and `phases` carrier phases per node.
  double sup_norm(int phases = 64) const {
    std::vector<std::vector<cplx>> env;
    for (int m = 0; m <= bands(); ++m) env.push_back(envelope(m));
    double best = 0.0;
    for (std::size_t j = 0; j < grid_.points(); ++j) {
      for (int p = 0; p < phases; ++p) {
        const double th = 2.0 * std::numbers::pi * p / phases;
        double v = env[0][j].real();
        for (int m = 1; m <= bands(); ++m) v += 2.0 * (env[m][j] * std::polar(1.0, m * th)).real();
        best = std::max(best, std::abs(v));
      }
    }
    return best;
  }

  /// Cheap bound sum_m mult_m max|A_m|.
  double amplitude_bound() const {
    double acc = 0.0;
    for (int m = 0; m <= bands(); ++m) {
      double peak = 0.0;
      for (const auto& v : envelope(m)) peak = std::max(peak, std::abs(v));
      acc += (m == 0 ? 1.0 : 2.0) * peak;
    }
    return acc;
  }

  BandedField derivative(int order) const {
    require(order >= 0, "BandedField::derivative: order must be non-negative");
    BandedField out(*this);
    for (int m = 0; m <= bands(); ++m) {
      auto b = out.band(m);
      for (std::size_t j = 0; j < b.size(); ++j) b[j] *= derivative_symbol(grid_.wavenumber(m, j), order);
    }
    return out;
  }

  BandedField& operator+=(const BandedField& o) { return axpy(1.0, o); }
  BandedField& operator-=(const BandedField& o) { return axpy(-1.0, o); }
  BandedField& operator*=(double a) {
    for (auto& b : c_)
      for (auto& v : b) v *= a;
    return *this;
  }
  friend BandedField operator+(BandedField a, const BandedField& b) { return a += b; }
  friend BandedField operator-(BandedField a, const BandedField& b) { return a -= b; }
  friend BandedField operator*(double a, BandedField b) { return b *= a; }

  /// Flat state: bands concatenated.
  State state() const {
    State s;
    s.reserve(c_.size() * grid_.points());
    for (const auto& b : c_) s.insert(s.end(), b.begin(), b.end());
    return s;
  }
  static BandedField from_state(const CarrierGrid& g, const State& s) {
    BandedField f(g);
    require(s.size() == f.c_.size() * g.points(), "BandedField: state size mismatch");
    for (std::size_t m = 0; m < f.c_.size(); ++m)
      std::copy_n(s.begin() + static_cast<long>(m * g.points()), g.points(), f.c_[m].begin());
    return f;
  }

  void mask(std::span<cplx> b) const {
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!grid_.retained(j)) b[j] = 0.0;
  }

 private:
  BandedField& axpy(double a, const BandedField& o) {
    require(grid_ == o.grid_, "BandedField: fields live on different grids");
    for (std::size_t m = 0; m < c_.size(); ++m)
      for (std::size_t j = 0; j < c_[m].size(); ++j) c_[m][j] += a * o.c_[m][j];
    return *this;
  }

  void make_real_envelope(std::span<cplx> b) const {
    const std::size_t n = b.size();
    for (std::size_t j = 1; j < n / 2; ++j) {
      const cplx avg = 0.5 * (b[j] + std::conj(b[n - j]));
      b[j] = avg;
      b[n - j] = std::conj(avg);
    }
    b[0] = b[0].real();
  }

  CarrierGrid grid_;
  std::vector<std::vector<cplx>> c_;
};

/// Envelope samples of bands -K..K for pointwise products; stored for m >= 0.
class BandSamples {
 public:
  BandSamples() = default;
  explicit BandSamples(const BandedField& f) {
    for (int m = 0; m <= f.bands(); ++m) env_.push_back(f.envelope(m));
  }
  BandSamples(int top, std::size_t points) : env_(static_cast<std::size_t>(top + 1), std::vector<cplx>(points)) {}

  int top() const noexcept { return static_cast<int>(env_.size()) - 1; }
  std::size_t points() const noexcept { return env_.front().size(); }
  cplx at(int m, std::size_t j) const {
    if (std::abs(m) > top()) return 0.0;
    return m >= 0 ? env_[static_cast<std::size_t>(m)][j] : std::conj(env_[static_cast<std::size_t>(-m)][j]);
  }
  std::vector<cplx>& band(int m) { return env_.at(static_cast<std::size_t>(m)); }
  const std::vector<cplx>& band(int m) const { return env_.at(static_cast<std::size_t>(m)); }

  /// Band convolution (a b)_p = sum_m a_m b_{p-m}, kept for p <= keep.
  friend BandSamples multiply(const BandSamples& a, const BandSamples& b, int keep) {
    const int top = std::min(keep, a.top() + b.top());
    BandSamples out(top, a.points());
    for (int p = 0; p <= top; ++p) {
      auto& r = out.band(p);
      for (int m = -a.top(); m <= a.top(); ++m) {
        if (std::abs(p - m) > b.top()) continue;
        for (std::size_t j = 0; j < r.size(); ++j) r[j] += a.at(m, j) * b.at(p - m, j);
      }
    }
    return out;
  }

  BandSamples& axpy(cplx s, const BandSamples& o) {
    for (int m = 0; m <= std::min(top(), o.top()); ++m)
      for (std::size_t j = 0; j < points(); ++j) env_[m][j] += s * o.env_[m][j];
    return *this;
  }

  /// Back to a banded field on `g` (bands above g.bands() are dropped).
  BandedField to_field(const CarrierGrid& g) const {
    BandedField f(g);
    for (int m = 0; m <= std::min(top(), g.bands()); ++m) f.set_envelope(m, env_[static_cast<std::size_t>(m)]);
    return f;
  }

 private:
  std::vector<std::vector<cplx>> env_;
};

inline BandedField product(const BandedField& a, const BandedField& b) {
  require(a.grid() == b.grid(), "product: fields live on different grids");
  return multiply(BandSamples(a), BandSamples(b), a.bands()).to_field(a.grid());
}

/// Derivatives 0..3 of a banded field as envelope samples.
struct BandedJet {
  BandSamples u, ux, uxx, uxxx;
  explicit BandedJet(const BandedField& f)
      : u(f), ux(f.derivative(1)), uxx(f.derivative(2)), uxxx(f.derivative(3)) {}
};

/// N(u) = c0 u^2 u_x + c1 u_x u_xx + c2 u u_xxx in banded form.
inline BandedField nonlinear_term(const BandedField& f, const EquationParams& p) {
  if (p.is_linear()) return BandedField(f.grid());
  const int M = f.bands();
  BandedJet J(f);
  BandSamples acc(M, f.grid().points());
  acc.axpy(p.c1, multiply(J.ux, J.uxx, M));
  acc.axpy(p.c2, multiply(J.u, J.uxxx, M));
  if (p.c0 != 0.0) acc.axpy(p.c0, multiply(multiply(J.u, J.u, 2 * M), J.ux, M));
  return acc.to_field(f.grid());
}

/// The full equation on a carrier grid; the state is the flat band spectrum.
class BandedProblem {
 public:
  BandedProblem(CarrierGrid grid, EquationParams p) : grid_(grid), p_(p) {
    p_.validate();
    omega_.reserve(static_cast<std::size_t>(grid.bands() + 1) * grid.points());
    for (int m = 0; m <= grid.bands(); ++m)
      for (std::size_t j = 0; j < grid.points(); ++j)
        omega_.push_back(grid.retained(j) ? dispersion(grid.wavenumber(m, j), p.sign) : 0.0);
  }

  const CarrierGrid& grid() const noexcept { return grid_; }
  const EquationParams& params() const noexcept { return p_; }
  std::span<const double> frequencies() const noexcept { return omega_; }

  BandedField field(const State& s) const { return BandedField::from_state(grid_, s); }

  void forcing(const State& s, State& out) const {
    out = nonlinear_term(field(s), p_).state();
    for (auto& v : out) v = -v;
  }
  double amplitude(const State& s) const { return field(s).amplitude_bound(); }
  double nonlinear_rate(const State& s) const {
    return detail::stiffness(grid_.max_wavenumber(), p_, amplitude(s));
  }

 private:
  CarrierGrid grid_;
  EquationParams p_;
  std::vector<double> omega_;
};

}  // namespace kdv5
