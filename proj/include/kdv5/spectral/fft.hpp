// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Thin FFTW wrapper. Plans are created under a process-wide lock (the
// FFTW planner is not thread safe) and cached per thread, so executing
// transforms never touches shared mutable state.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace kdv5::fft {

using cplx = std::complex<double>;

namespace detail {

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

enum class Kind : int { r2c = 0, c2r = 1, c2c_forward = 2, c2c_backward = 3 };

class PlanCache {
 public:
  PlanCache() = default;
  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;
  ~PlanCache() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, std::size_t n) {
    const std::size_t key = n * 4 + static_cast<std::size_t>(kind);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = make(kind, n);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  static fftw_plan make(Kind kind, std::size_t n) {
    const int len = static_cast<int>(n);
    constexpr unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::vector<double> r(n);
    std::vector<cplx> c(n);
    auto* cp = reinterpret_cast<fftw_complex*>(c.data());
    std::vector<cplx> c2(n);
    auto* cp2 = reinterpret_cast<fftw_complex*>(c2.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    switch (kind) {
      case Kind::r2c: return fftw_plan_dft_r2c_1d(len, r.data(), cp, flags);
      case Kind::c2r: return fftw_plan_dft_c2r_1d(len, cp, r.data(), flags);
      case Kind::c2c_forward: return fftw_plan_dft_1d(len, cp, cp2, FFTW_FORWARD, flags);
      case Kind::c2c_backward: return fftw_plan_dft_1d(len, cp, cp2, FFTW_BACKWARD, flags);
    }
    return nullptr;
  }

  std::unordered_map<std::size_t, fftw_plan> plans_;
};

inline PlanCache& cache() {
  thread_local PlanCache c;
  return c;
}

inline fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace detail

/// Unnormalized real-to-half-complex transform: out[k] = sum_j in[j] e^{-2 pi i jk/n}.
/// `out` must hold n/2+1 values.
inline void forward_real(std::span<const double> in, std::span<cplx> out) {
  const std::size_t n = in.size();
  std::vector<double> scratch(in.begin(), in.end());
  fftw_execute_dft_r2c(detail::cache().get(detail::Kind::r2c, n), scratch.data(),
                       detail::as_fftw(out.data()));
}

/// Unnormalized half-complex-to-real transform (inverse of forward_real up to n).
/// `in` holds n/2+1 values; `out` holds n values. The input is not modified.
inline void inverse_real(std::span<const cplx> in, std::span<double> out) {
  const std::size_t n = out.size();
  std::vector<cplx> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(detail::cache().get(detail::Kind::c2r, n), detail::as_fftw(scratch.data()),
                       out.data());
}

/// Unnormalized complex transform with e^{-2 pi i jk/n}.
inline void forward_complex(std::span<const cplx> in, std::span<cplx> out) {
  std::vector<cplx> scratch(in.begin(), in.end());
  fftw_execute_dft(detail::cache().get(detail::Kind::c2c_forward, in.size()),
                   detail::as_fftw(scratch.data()), detail::as_fftw(out.data()));
}

/// Unnormalized complex transform with e^{+2 pi i jk/n}.
inline void inverse_complex(std::span<const cplx> in, std::span<cplx> out) {
  std::vector<cplx> scratch(in.begin(), in.end());
  fftw_execute_dft(detail::cache().get(detail::Kind::c2c_backward, in.size()),
                   detail::as_fftw(scratch.data()), detail::as_fftw(out.data()));
}

}  // namespace kdv5::fft
