// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "kdv5/error.hpp"

namespace kdv5 {

/// Uniform periodic grid on [-length/2, length/2) with a power-of-two point count.
class TorusGrid {
 public:
  TorusGrid(double length, std::size_t points) : length_(length), points_(points) {
    require(std::isfinite(length) && length > 0.0, "TorusGrid: length must be positive and finite");
    require(points >= 8 && std::has_single_bit(points),
            "TorusGrid: points must be a power of two >= 8, got " + std::to_string(points));
  }

  double length() const noexcept { return length_; }
  std::size_t points() const noexcept { return points_; }
  double spacing() const noexcept { return length_ / static_cast<double>(points_); }
  /// Number of stored coefficients of a real field (non-negative indices 0..N/2).
  std::size_t modes() const noexcept { return points_ / 2 + 1; }
  std::size_t nyquist_index() const noexcept { return points_ / 2; }
  /// Spacing of the wavenumber lattice, 2 pi / length.
  double fundamental() const noexcept { return 2.0 * std::numbers::pi / length_; }

  double node(std::size_t j) const noexcept {
    return -0.5 * length_ + static_cast<double>(j) * spacing();
  }

  /// Signed integer index of FFT slot j (Nyquist kept positive).
  long signed_index(std::size_t j) const noexcept {
    const long n = static_cast<long>(points_);
    const long jj = static_cast<long>(j);
    return jj <= n / 2 ? jj : jj - n;
  }

  /// Wavenumber 2 pi j_eff / length of FFT slot j.
  double wavenumber(std::size_t j) const noexcept {
    return fundamental() * static_cast<double>(signed_index(j));
  }

  /// All N wavenumbers in FFT order.
  std::vector<double> wavenumbers() const {
    std::vector<double> k(points_);
    for (std::size_t j = 0; j < points_; ++j) k[j] = wavenumber(j);
    return k;
  }

  /// Largest resolved |k|.
  double max_wavenumber() const noexcept { return fundamental() * static_cast<double>(points_ / 2); }

  /// Same period, different resolution.
  TorusGrid refined(std::size_t points) const { return TorusGrid(length_, points); }

  bool operator==(const TorusGrid& o) const noexcept {
    return length_ == o.length_ && points_ == o.points_;
  }

 private:
  double length_;
  std::size_t points_;
};

inline void require_same_grid(const TorusGrid& a, const TorusGrid& b, const char* where) {
  require(a == b, std::string(where) + ": fields live on different grids");
}

}  // namespace kdv5
