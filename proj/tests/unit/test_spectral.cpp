// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "kdv5/spectral/littlewood_paley.hpp"
#include "kdv5/spectral/mollifier.hpp"
#include "support.hpp"

using namespace kdv5;
using Catch::Approx;
using std::numbers::pi;

TEST_CASE("TorusGrid geometry", "[grid]") {
  TorusGrid g(2 * pi, 64);
  CHECK(g.spacing() * 64 == Approx(2 * pi).epsilon(1e-15));
  CHECK(g.node(32) == 0.0);
  auto k = g.wavenumbers();
  CHECK(k[32] == Approx(32.0));  // unmatched Nyquist
  for (std::size_t j = 1; j < 32; ++j) CHECK(k[j] == -k[64 - j]);
  CHECK_THROWS_AS(TorusGrid(2 * pi, 48), InvalidArgument);
  CHECK_THROWS_AS(TorusGrid(2 * pi, 4), InvalidArgument);
  CHECK_THROWS_AS(TorusGrid(-1.0, 64), InvalidArgument);
}

TEST_CASE("transform round trip and Plancherel", "[transform]") {
  SECTION("zero field") {
    TorusGrid g(2 * pi, 32);
    auto F = to_spectral(RealField(g));
    for (auto c : F.coefficients()) CHECK(std::abs(c) == 0.0);
    CHECK(from_spectral(F).max_abs() == 0.0);
  }
  SECTION("single cosine has two coefficients of magnitude one half") {
    TorusGrid g(2 * pi, 64);
    auto f = RealField::from_function(g, [](double x) { return std::cos(3 * x); });
    auto F = to_spectral(f);
    for (long n = -31; n <= 32; ++n) {
      const double expected = (n == 3 || n == -3) ? 0.5 : 0.0;
      CHECK(std::abs(F.coefficient(n)) == Approx(expected).margin(1e-15));
    }
    CHECK(testing::max_abs_diff(from_spectral(F), f) < 1e-14);
  }
  SECTION("random smooth field against a direct quadrature oracle") {
    TorusGrid g(10.0, 256);
    auto f = testing::random_field(g, 40, 7);
    auto F = to_spectral(f);
    for (long n : {0L, 1L, 5L, 39L, -17L}) {
      CHECK(std::abs(F.coefficient(n) - testing::naive_coefficient(f, n)) < 1e-13);
    }
    double quad = 0.0;
    for (std::size_t j = 0; j < g.points(); ++j) quad += f[j] * f[j] * g.spacing();
    CHECK(F.l2_norm() == Approx(std::sqrt(quad)).epsilon(1e-12));
    CHECK(testing::rel_l2_diff(from_spectral(F), f) < 1e-12);
  }
  SECTION("non-finite samples are rejected") {
    TorusGrid g(1.0, 8);
    std::vector<double> s(8, 0.0);
    s[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(RealField(g, s), InvalidArgument);
  }
  SECTION("resampling preserves a band-limited field") {
    TorusGrid g(2 * pi, 64);
    auto f = testing::random_field(g, 20, 3);
    auto fine = resample(f, 256);
    auto back = resample(fine, 64);
    CHECK(testing::max_abs_diff(back, f) < 1e-13);
    CHECK(fine.l2_norm() == Approx(f.l2_norm()).epsilon(1e-13));
  }
}

TEST_CASE("fractional derivatives", "[operators]") {
  TorusGrid g(2 * pi, 64);
  SECTION("D^{1/2} of cos(2x)") {
    auto f = RealField::from_function(g, [](double x) { return std::cos(2 * x); });
    auto d = frac_derivative(f, 0.5, Flavor::homogeneous);
    CHECK(testing::max_abs_diff(d, std::sqrt(2.0) * f) < 1e-13);
  }
  SECTION("J^0 is the identity") {
    auto f = testing::random_field(g, 20, 11);
    CHECK(testing::max_abs_diff(frac_derivative(f, 0.0, Flavor::inhomogeneous), f) < 1e-14);
  }
  SECTION("two-mode field against per-mode symbols") {
    auto f = RealField::from_function(g, [](double x) { return 0.3 * std::cos(x) - 1.2 * std::sin(7 * x); });
    const double s = 1.7;
    auto expect_D = RealField::from_function(
        g, [&](double x) { return 0.3 * std::cos(x) - 1.2 * std::pow(7.0, s) * std::sin(7 * x); });
    auto expect_J = RealField::from_function(g, [&](double x) {
      return 0.3 * std::pow(2.0, s / 2) * std::cos(x) - 1.2 * std::pow(50.0, s / 2) * std::sin(7 * x);
    });
    CHECK(testing::max_abs_diff(frac_derivative(f, s, Flavor::homogeneous), expect_D) < 1e-12);
    CHECK(testing::max_abs_diff(frac_derivative(f, s, Flavor::inhomogeneous), expect_J) < 1e-11);
  }
  SECTION("composition law") {
    auto f = testing::random_field(g, 25, 5);
    for (auto fl : {Flavor::homogeneous, Flavor::inhomogeneous}) {
      auto lhs = frac_derivative(frac_derivative(f, 0.7, fl), 1.6, fl);
      auto rhs = frac_derivative(f, 2.3, fl);
      CHECK(testing::rel_l2_diff(lhs, rhs) < 1e-11);
    }
  }
  SECTION("homogeneous flavor with negative s is rejected") {
    auto f = testing::random_field(g, 5, 1);
    CHECK_THROWS_AS(frac_derivative(f, -0.5, Flavor::homogeneous), InvalidArgument);
    CHECK_NOTHROW(frac_derivative(f, -0.5, Flavor::inhomogeneous));
  }
}

TEST_CASE("integer derivatives", "[operators]") {
  TorusGrid g(2 * pi, 64);
  auto c = RealField::from_function(g, [](double x) { return std::cos(x); });
  auto ms = RealField::from_function(g, [](double x) { return -std::sin(x); });
  CHECK(testing::max_abs_diff(integer_derivative(c, 1), ms) < 1e-13);

  auto F = to_spectral(RealField::from_function(g, [](double x) { return std::cos(4 * x); }));
  auto D5 = integer_derivative(F, 5);
  const cplx expected = F.coefficient(4) * cplx(0.0, std::pow(4.0, 5));
  CHECK(std::abs(D5.coefficient(4) - expected) < 1e-10);

  auto f = testing::random_field(g, 20, 9);
  auto d3 = integer_derivative(f, 3);
  auto d111 = integer_derivative(integer_derivative(integer_derivative(f, 1), 1), 1);
  CHECK(testing::rel_l2_diff(d3, d111) < 1e-12);
}

TEST_CASE("Littlewood-Paley partition", "[lp]") {
  SECTION("multipliers sum to one") {
    std::vector<LPBand> bands;
    for (unsigned long n = 1; n <= 4096; n *= 2) bands.emplace_back(n);
    for (double k = 0.0; k <= 2048.0; k += 0.37) {
      double sum = 0.0;
      for (const auto& b : bands) sum += b.multiplier(k);
      CHECK(sum == Approx(1.0).margin(1e-12));
    }
  }
  TorusGrid g(2 * pi, 256);
  SECTION("single mode is split by the partition and reassembled") {
    auto f = RealField::from_function(g, [](double x) { return std::cos(5 * x); });
    auto p4 = lp_project(f, LPBand(4));
    CHECK_FALSE(p4.empty_band);
    CHECK(testing::max_abs_diff(p4.field, LPBand(4).multiplier(5.0) * f) < 1e-14);
    RealField sum(g);
    for (const auto& b : lp_bands(g)) sum += lp_project(f, b).field;
    CHECK(testing::rel_l2_diff(sum, f) < 1e-12);
  }
  SECTION("well separated modes land in their own bands") {
    auto lo = RealField::from_function(g, [](double x) { return std::cos(x); });
    auto hi = RealField::from_function(g, [](double x) { return std::cos(64 * x); });
    auto f = lo + hi;
    auto p1 = lp_project(f, LPBand(1)).field;
    auto p64 = lp_project(f, LPBand(64)).field;
    CHECK(testing::max_abs_diff(p1, LPBand(1).multiplier(1.0) * lo) < 1e-14);
    CHECK(testing::max_abs_diff(p64, LPBand(64).multiplier(64.0) * hi) < 1e-13);
    double energy = 0.0;
    for (const auto& b : lp_bands(g)) {
      auto p = lp_project(f, b).field;
      energy += p.l2_norm() * p.l2_norm();
    }
    // cos(x) and cos(64x) each sit where a single band has weight 1.
    CHECK(energy == Approx(f.l2_norm() * f.l2_norm()).epsilon(1e-12));
  }
  SECTION("zero field and out-of-range band") {
    RealField z(g);
    for (const auto& b : lp_bands(g)) CHECK(lp_project(z, b).field.max_abs() == 0.0);
    auto out = lp_project(testing::random_field(g, 10, 2), LPBand(1024));
    CHECK(out.empty_band);
    CHECK(out.field.max_abs() == 0.0);
  }
  SECTION("random field reconstruction") {
    auto f = testing::random_field(g, 120, 4, 0.5);
    RealField sum(g);
    for (const auto& b : lp_bands(g)) sum += lp_project(f, b).field;
    CHECK(testing::rel_l2_diff(sum, f) < 1e-12);
  }
}

TEST_CASE("mollifier", "[mollifier]") {
  SECTION("kernel has unit mass by independent quadrature") {
    using boost::math::quadrature::gauss_kronrod;
    const double eps = 0.3;
    MollifierSpec m(eps);
    const double mass = gauss_kronrod<double, 31>::integrate([&](double x) { return m.kernel(x); }, -eps, eps,
                                                             20, 1e-14);
    CHECK(mass == Approx(1.0).margin(1e-10));
  }
  TorusGrid g(2 * pi, 1024);
  SECTION("constants are preserved") {
    auto c = RealField::from_function(g, [](double) { return 2.5; });
    CHECK(testing::max_abs_diff(mollify(c, MollifierSpec(0.2)), c) < 1e-10);
  }
  SECTION("approximate identity on smooth data") {
    auto f = testing::random_field(g, 12, 8);
    double prev = 1e300;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
      const double err = (f - mollify(f, MollifierSpec(eps))).l2_norm();
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-2 * f.l2_norm());
  }
  SECTION("epsilon below resolution is rejected") {
    auto f = testing::random_field(g, 12, 8);
    CHECK_THROWS_AS(mollify(f, MollifierSpec(g.spacing())), InvalidArgument);
  }
}

TEST_CASE("mollifier smoothing power laws", "[mollifier][slow]") {
  // Rough field sitting just inside H^s: |c_n|^2 ~ n^{-2s-1-2 gamma}.
  const double s = 1.0, gamma = 0.05;
  TorusGrid g(2 * pi, 1 << 15);
  std::vector<cplx> c(g.modes());
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> phase(0.0, 2 * pi);
  for (std::size_t n = 1; n + 1 < c.size(); ++n)
    c[n] = std::polar(std::pow(static_cast<double>(n), -(2 * s + 1 + 2 * gamma) / 2), phase(rng));
  auto f = from_spectral(SpectralField(g, c));
  auto hnorm = [](const RealField& u, double r) {
    return to_spectral(u).weighted_energy([&](double k) { return std::pow(1 + k * k, r); });
  };
  std::vector<double> eps{0.01, 0.0178, 0.0316, 0.0562, 0.1};
  for (double t : {0.5, 1.0}) {
    std::vector<double> up, down;
    for (double e : eps) {
      auto fe = mollify(f, MollifierSpec(e));
      up.push_back(std::sqrt(hnorm(fe, s + t)));
      down.push_back(std::sqrt(hnorm(f - fe, s - t)));
    }
    CHECK(testing::loglog_slope(eps, up) == Approx(-t).margin(0.2));
    CHECK(testing::loglog_slope(eps, down) == Approx(t).margin(0.2));
  }
}
