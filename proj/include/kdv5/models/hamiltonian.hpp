// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Conserved functionals of the integrable flow:
//   H0 = int u^2/2,
//   H1 = int -u_x^2/2 + u^3,
//   H2 = int u_xx^2/2 - 5 u u_x^2 + 5 u^4/2.

#include <string>
#include <vector>

#include "kdv5/models/equation.hpp"

namespace kdv5 {

class HamiltonianId {
 public:
  explicit HamiltonianId(int index) : index_(index) {
    require(index >= 0 && index <= 2, "HamiltonianId: index must be 0, 1 or 2");
  }
  int index() const noexcept { return index_; }
  std::string name() const { return "H" + std::to_string(index_); }

 private:
  int index_;
};

/// Reading of the quadratic-in-derivative term of H2 used by this library.
inline constexpr const char* kH2Reading = "int u_xx^2/2 - 5 u (u_x)^2 + 5 u^4/2";

namespace detail {
/// d^order of F sampled on a 4N grid; quartic integrands of a band-limited field
/// are integrated exactly by the trapezoid rule there.
inline std::vector<double> quad_grid_derivative(const SpectralField& F, int order) {
  auto r = from_spectral(resample(integer_derivative(F, order), 4 * F.grid().points()));
  return {r.samples().begin(), r.samples().end()};
}
}  // namespace detail

inline double hamiltonian(const SpectralField& F, HamiltonianId h) {
  const auto u = detail::quad_grid_derivative(F, 0);
  const double w = F.grid().length() / static_cast<double>(u.size());
  double acc = 0.0;
  switch (h.index()) {
    case 0:
      for (double v : u) acc += 0.5 * v * v;
      break;
    case 1: {
      const auto ux = detail::quad_grid_derivative(F, 1);
      for (std::size_t j = 0; j < u.size(); ++j) acc += -0.5 * ux[j] * ux[j] + u[j] * u[j] * u[j];
      break;
    }
    default: {
      const auto ux = detail::quad_grid_derivative(F, 1);
      const auto uxx = detail::quad_grid_derivative(F, 2);
      for (std::size_t j = 0; j < u.size(); ++j) {
        const double v = u[j];
        acc += 0.5 * uxx[j] * uxx[j] - 5.0 * v * ux[j] * ux[j] + 2.5 * v * v * v * v;
      }
    }
  }
  return acc * w;
}

inline double hamiltonian(const RealField& u, HamiltonianId h) { return hamiltonian(to_spectral(u), h); }

}  // namespace kdv5
