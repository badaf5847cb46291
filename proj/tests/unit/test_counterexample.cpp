// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "kdv5/analysis/norms.hpp"
#include "kdv5/counterexample/experiments.hpp"
#include "kdv5/counterexample/scaling.hpp"
#include "support.hpp"

using namespace kdv5;
using Catch::Approx;
using std::numbers::pi;

namespace {

// ||phi||_{L^2}^2 from a direct Simpson convolution of the indicator with the
// kernel followed by Simpson in x (independent of the library's quadrature).
constexpr double kPhiNormSquared = 2.77126402009646;

// Small-lambda member whose dense grid is affordable: lambda = 4, delta = 1/2.
CounterexampleParams small_member(double s = 1.0) {
  CounterexampleParams cp;
  cp.lambda = 4.0;
  cp.delta = 0.5;
  cp.s = s;
  cp.Lambda_amp = 0.05;
  return cp;
}

// Sweeps run on a 4096-point envelope grid; exactness checks use the default 8192.
CounterexampleParams sweep_member(double lambda, double s = 3.0, std::size_t points = 4096) {
  CounterexampleParams cp;
  cp.lambda = lambda;
  cp.s = s;
  cp.envelope_points = points;
  return cp;
}

// Dense grid of the carrier period wide enough for bands 0..2.
TorusGrid dense_grid(const CarrierGrid& g) {
  std::size_t n = 1024;
  while (n / 3 <= static_cast<std::size_t>(g.dense_index(g.bands(), g.points() / 4))) n *= 2;
  return TorusGrid(g.length(), n);
}

double band_energy_outside(const BandedField& f, int m, double radius) {
  double out = 0.0, all = 0.0;
  auto b = f.band(m);
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double e = std::norm(b[j]);
    all += e;
    if (std::abs(f.grid().envelope().wavenumber(j)) > radius) out += e;
  }
  return out / all;
}

}  // namespace

TEST_CASE("bump profiles", "[counterexample]") {
  CHECK(bump_phi(0.0) == 1.0);
  CHECK(bump_phi(1.0) == 1.0);
  CHECK(bump_phi(3.0) == 0.0);
  CHECK(bump_phi(-2.0) == 0.0);
  CHECK(bump_phi_wide(2.0) == 1.0);
  CHECK(bump_phi_wide(4.0) == 0.0);
  for (double x = 1.0; x < 2.0; x += 0.01) {
    CHECK(bump_phi(x) > 0.0);
    CHECK(bump_phi(x) <= 1.0);
    CHECK(bump_phi(x + 0.01) <= bump_phi(x));
    CHECK(bump_phi(x) == Approx(bump_phi(-x)).margin(1e-15));
  }

  SECTION("the wide bump is one on the support of the narrow one") {
    const TorusGrid g(40.0, 4096);
    const auto phi = bump_phi(g, 2.5), wide = bump_phi_wide(g, 2.5);
    CHECK(testing::max_abs_diff(hadamard(phi, wide), phi) <= 1e-12);
  }

  SECTION("L2 norm against the quadrature golden value") {
    const double n2 = bump_phi_norm_squared();
    CHECK(n2 > 2.0);
    CHECK(n2 < 4.0);
    CHECK(n2 == Approx(kPhiNormSquared).epsilon(1e-12));
    // phi_w(x) = phi(x / 2), so its squared norm doubles.
    CHECK(bump_phi_wide_norm_squared() == Approx(2.0 * n2).epsilon(1e-12));
    const TorusGrid g(64.0, 8192);
    CHECK(bump_phi(g, 3.0).l2_norm() == Approx(std::sqrt(3.0 * n2)).epsilon(1e-12));
  }

  SECTION("under-resolved or oversized profiles are rejected") {
    CHECK_THROWS_AS(bump_phi(TorusGrid(64.0, 64), 1.0), InvalidArgument);
    CHECK_THROWS_AS(bump_phi_wide(TorusGrid(64.0, 8192), 10.0), InvalidArgument);
  }
}

TEST_CASE("carrier-envelope fields", "[counterexample]") {
  const auto cp = small_member();
  const auto g = cp.carrier_grid();
  const auto dg = dense_grid(g);
  REQUIRE(g.carrier() == Approx(cp.lambda).epsilon(1e-14));
  REQUIRE(g.length() >= cp.min_length());

  const auto ub = build_initial_banded(cp, g);
  const auto ud = build_initial_data(cp, dg);

  SECTION("banded data agree with pointwise sampling") {
    CHECK(testing::rel_l2_diff(ub.to_dense(dg.points()), ud) <= 1e-12);
    const auto F = to_spectral(ud);
    for (double s : {0.0, 1.0, 3.0}) CHECK(ub.sobolev(s) == Approx(sobolev_norm(F, Hs(s))).epsilon(1e-11));
    CHECK(ub.sup_norm(256) == Approx(ud.max_abs()).epsilon(1e-3));
  }

  SECTION("products match dense products") {
    const auto a = ub.to_dense(dg.points());
    const auto sq = product(ub, ub).to_dense(dg.points());
    CHECK(testing::rel_l2_diff(sq, hadamard(a, a)) <= 1e-12);
  }

  SECTION("linear flow matches the dense solver exactly") {
    const auto p = EquationParams::linear(1);
    auto out = solve_banded(ub, p, {0.3});
    const auto ref = linear_propagator(ud, 0.3, 1);
    CHECK(testing::rel_l2_diff(out.back().to_dense(dg.points()), ref) <= 1e-12);
  }

  SECTION("nonlinear flow matches the dense solver up to the band truncation") {
    // Bands |m| >= 3 are dropped; their amplitude is quadratic in the data, so
    // halving the data shrinks the relative gap about fourfold.
    std::vector<double> gaps;
    for (double amp : {0.05, 0.025}) {
      auto c = cp;
      c.Lambda_amp = amp;
      for (auto p : {EquationParams::general(), EquationParams::integrable()}) {
        auto b = solve_banded(build_initial_banded(c, g), p, {0.25}, 1.0 / 128);
        const auto d = solve_to(to_spectral(build_initial_data(c, dg)), p, 0.25, 1.0 / 128);
        gaps.push_back(testing::rel_l2_diff(b.back().to_dense(dg.points()), from_spectral(d)));
      }
    }
    CHECK(gaps[0] < 1e-4);
    CHECK(gaps[1] < 1e-4);
    CHECK(gaps[0] / gaps[2] > 3.0);
    CHECK(gaps[1] / gaps[3] > 3.0);
  }

  SECTION("grid preconditions") {
    CHECK_THROWS_AS(CarrierGrid(TorusGrid(10.0, 512), 100, 2), InvalidArgument);
    CHECK_THROWS_AS(CarrierGrid(TorusGrid(10.0, 510), 1000, 2), InvalidArgument);
    CHECK_THROWS_AS(CarrierGrid::fit(0.0, 10.0, 512), InvalidArgument);
    const auto coarse = TorusGrid(g.length(), 512);
    CHECK_THROWS_AS(ub.to_dense(coarse.points()), InvalidArgument);
  }
}

TEST_CASE("initial data of the two-scale family", "[counterexample]") {
  SECTION("the omega pair differs by twice the low part") {
    const auto cp = small_member();
    const auto dg = dense_grid(cp.carrier_grid());
    const auto up = build_initial_data(cp.with_omega(1), dg);
    const auto um = build_initial_data(cp.with_omega(-1), dg);
    const auto wide = bump_phi_wide(dg, cp.scale());
    const double c = -2.0 * cp.Lambda_amp * std::pow(cp.lambda, -3.0);
    CHECK(testing::max_abs_diff(up - um, c * wide) <= 1e-18);
  }

  SECTION("low-part norm follows the rescaling law") {
    for (double lam : {8.0, 16.0, 32.0}) {
      const auto cp = sweep_member(lam);
      const double expected = cp.Lambda_amp * std::pow(lam, -3.0) * std::pow(lam, 0.5 * (4.0 + cp.delta)) *
                              std::sqrt(2.0 * kPhiNormSquared);
      CHECK(low_data(cp, cp.carrier_grid()).l2_norm() == Approx(expected).epsilon(1e-8));
    }
  }

  SECTION("H^s norm of the data is uniform in lambda") {
    // With delta = 1/4 the low part decays like lambda^{-7/8}, which keeps the
    // total within the 10% band from lambda = 8 on.
    std::vector<double> norms;
    for (double lam : {8.0, 16.0, 32.0, 64.0}) {
      auto cp = sweep_member(lam);
      cp.delta = 0.25;
      norms.push_back(build_initial_banded(cp, cp.carrier_grid()).sobolev(cp.s));
    }
    const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
    CHECK(*hi / *lo < 1.10);
    CHECK(*hi < 3.0 * sweep_member(8).Lambda_amp);
  }

  SECTION("parameter validation") {
    auto cp = sweep_member(8);
    cp.delta = 2.0;
    CHECK_THROWS_AS(cp.validate(), InvalidArgument);
    cp.delta = 0.2;
    cp.s = 0.5;  // needs delta > 1
    CHECK_THROWS_AS(cp.validate(), InvalidArgument);
    cp = sweep_member(8);
    cp.omega = 0;
    CHECK_THROWS_AS(cp.validate(), InvalidArgument);
    cp = sweep_member(8);
    cp.length_factor = 8.0;
    CHECK_THROWS_AS(cp.validate(), InvalidArgument);
    const auto small = small_member();
    CHECK_THROWS_AS(build_initial_data(small, TorusGrid(small.min_length() / 2, 4096)), InvalidArgument);
    CHECK_THROWS_AS(build_initial_data(small, TorusGrid(small.min_length() * 1.01, 1024)), InvalidArgument);
  }
}

TEST_CASE("approximate solution", "[counterexample]") {
  const auto p = EquationParams::general();
  const auto cp = sweep_member(8);
  const auto st = evolve_low(cp, p, 1.0);

  SECTION("consistency at t = 0") {
    CHECK((st.u_ap(0.0) - build_initial_banded(cp, st.grid())).l2_norm() <= 1e-10 * st.u_ap(0.0).l2_norm());
    CHECK((st.u_low(0.0) - low_data(cp, st.grid())).l2_norm() == 0.0);
    CHECK_THROWS_AS(st.u_low(1.5), InvalidArgument);
  }

  SECTION("dense evaluation on a small member") {
    const auto small = small_member();
    const auto sst = evolve_low(small, p, 0.2, 8);
    const auto dg = dense_grid(sst.grid());
    CHECK(testing::rel_l2_diff(u_ap_eval(sst, 0.0, dg.points()), build_initial_data(small, dg)) <= 1e-12);
    CHECK_THROWS_AS(u_ap_eval(sst, 0.3, dg.points()), InvalidArgument);
  }

  SECTION("high part is localized near the carrier and keeps its norm") {
    const auto h = st.hi_banded(0.7);
    CHECK(band_energy_outside(h, 1, 200.0 / cp.scale()) < 1e-10);
    CHECK(band_energy_outside(h, 1, 2.0 / cp.scale()) > 1e-6);
    CHECK(h.sobolev(cp.s) == Approx(st.hi_banded(0.0).sobolev(cp.s)).epsilon(1e-3));
  }

  SECTION("quartic interpolation of the low part is cadence-converged") {
    const auto st2 = evolve_low(cp, p, 1.0, 128);
    for (double t : {0.013, 0.5077, 0.99}) {
      const auto [d1, v1] = st.drift(t);
      const auto [d2, v2] = st2.drift(t);
      CHECK((d1 - d2).l2_norm() <= 1e-8 * std::max(d2.l2_norm(), 1e-300) + 1e-40);
      CHECK((st.u_ap(t) - st2.u_ap(t)).l2_norm() <= 1e-8 * st.u_ap(t).l2_norm());
    }
  }

  SECTION("residual parts add up to the directly evaluated residual") {
    const auto r = residual_F(st, 0.4, p, {1.0});
    CHECK(r.parts[0] < 1e-8);
    CHECK(r.mismatch <= 1e-9 * r.total);
    CHECK(r.sum == Approx(r.total).epsilon(1e-9));
    CHECK(r.total <= r.part_sum() * (1.0 + 1e-12));
    CHECK(r.hs.front().second > r.total);
    CHECK_THROWS_AS(residual_F(st, 0.4, EquationParams::integrable()), InvalidArgument);
  }
}

TEST_CASE("residual power laws over lambda", "[counterexample][sweep]") {
  const std::vector<double> lams{8.0, 16.0, 32.0};
  struct Case {
    EquationParams p;
    double s;
  };
  for (const auto& c : {Case{EquationParams::general(), 3.0}, Case{EquationParams::integrable(), 1.0}}) {
    std::vector<double> l2, h1, h2;
    for (double lam : lams) {
      const auto st = evolve_low(sweep_member(lam, c.s), c.p, 0.5, 16);
      const auto r = residual_F(st, 0.5, c.p, {1.0, 2.0});
      CHECK(r.parts[0] < 1e-8);
      l2.push_back(r.total);
      h1.push_back(r.hs[0].second / r.total);
      h2.push_back(r.hs[1].second / r.total);
    }
    const double delta = 1.0;
    const double predicted = std::max(-c.s - delta, (2.0 - delta) / 2.0 - 2.0 * c.s);
    CHECK(testing::loglog_slope(lams, l2) == Approx(predicted).margin(0.3));
    CHECK(testing::loglog_slope(lams, h1) == Approx(1.0).margin(0.3));
    CHECK(testing::loglog_slope(lams, h2) == Approx(2.0).margin(0.3));
  }
}

TEST_CASE("low-part bounds", "[counterexample][sweep]") {
  SECTION("exact laws at t = 0") {
    std::vector<double> lams{8.0, 16.0, 32.0}, l2;
    for (double lam : lams) {
      const auto cp = sweep_member(lam, 3.0, 8192);
      const auto u = low_data(cp, cp.carrier_grid());
      l2.push_back(u.l2_norm());
      const double sup = from_spectral(u).max_abs();
      CHECK(sup == Approx(cp.Lambda_amp * std::pow(lam, -3.0)).epsilon(1e-12));
    }
    CHECK(testing::loglog_slope(lams, l2) == Approx(-0.5).margin(1e-3));
  }

  SECTION("general preset: every law holds") {
    const auto rep = lowbound_check(sweep_member(8), EquationParams::general(), 2);
    INFO(rep.to_json().dump(2));
    CHECK(rep.pass);
    CHECK(rep.exponents.at("drift") == Approx(-18.0).margin(1.0));
  }

  SECTION("integrable preset: the cubic term sets a slower drift") {
    // c0 u^2 u_x is of size lambda^{-9-(4+delta)} on a support of width
    // lambda^{4+delta}, which gives an L^2 drift rate of lambda^{-11.5}.
    std::vector<double> lams{8.0, 16.0}, drift;
    for (double lam : lams) {
      const auto st = evolve_low(sweep_member(lam), EquationParams::integrable(), 1.0, 16);
      drift.push_back(st.u_low_traj().snapshots.back().l2_norm());
    }
    CHECK(testing::loglog_slope(lams, drift) == Approx(-11.5).margin(0.3));
  }
}

TEST_CASE("normalized carrier norm limit", "[counterexample]") {
  const double ref = std::sqrt(0.5 * kPhiNormSquared);
  CHECK(lemma61_reference() == Approx(ref).epsilon(1e-12));

  SECTION("s = 0 splits the energy evenly between the two shells") {
    const auto r = lemma61_limit(0.0, 1.0, 0.3, {16, 32, 64, 128});
    for (double v : r.values) CHECK(v == Approx(ref).epsilon(1e-10));
    CHECK(r.monotone);
  }

  SECTION("s = 0 against direct quadrature on a dense grid") {
    const double lam = 2.0, delta = 0.5, alpha = 0.7, sc = std::pow(lam, 4.0 + delta);
    const TorusGrid g(16.0 * sc, 4096);
    const auto f = RealField::from_function(g, [&](double x) { return bump_phi(x / sc) * std::sin(lam * x + alpha); });
    const double direct = std::pow(lam, -0.5 * (4.0 + delta)) * f.l2_norm();
    CHECK(direct == Approx(ref).epsilon(1e-6));
    CHECK(normalized_carrier_norm(0.0, delta, alpha, 16.0) == Approx(ref).epsilon(1e-10));
  }

  SECTION("s = 3 converges monotonically") {
    const auto r = lemma61_limit(3.0, 1.0, 0.0, {16, 32, 64, 128});
    CHECK(r.monotone);
    CHECK(r.relative_error() < 0.02);
    CHECK(std::abs(r.estimate - ref) < std::abs(r.values.back() - ref));
    const auto r2 = lemma61_limit(3.0, 1.0, pi / 3, {16, 32, 64, 128});
    CHECK(r2.values.back() == Approx(r.values.back()).epsilon(0.005));
    CHECK(lemma61_report(3.0, 1.0, {16, 32, 64, 128}).pass);
  }

  SECTION("preconditions") {
    CHECK_THROWS_AS(lemma61_limit(1.0, 1.0, 0.0, {32, 16}), InvalidArgument);
    CHECK_THROWS_AS(lemma61_limit(1.0, 1.0, 0.0, {16}), InvalidArgument);
    CHECK_THROWS_AS(lemma61_limit(1.0, 2.5, 0.0, {16, 32}), InvalidArgument);
  }
}

TEST_CASE("solutions from the two-scale data", "[counterexample][sweep]") {
  const std::vector<double> times{0.0, 0.5, 1.0};

  SECTION("distance to the approximate solution shrinks with lambda") {
    const auto p = EquationParams::general();
    auto e8 = approx_error_curve(sweep_member(8), p, times, 1.0 / 64);
    auto e16 = approx_error_curve(sweep_member(16), p, times, 1.0 / 64);
    CHECK(e8.error_hs.front() <= 1e-10);
    CHECK(e16.error_hs.back() < e8.error_hs.back());
    CHECK(e16.error_l2.back() < e8.error_l2.back());
    // Time step convergence of the carrier solve.
    auto fine = approx_error_curve(sweep_member(8), p, times, 1.0 / 256);
    CHECK(fine.error_hs.back() == Approx(e8.error_hs.back()).epsilon(1e-6));
  }

  SECTION("the omega pair separates at the envelope rate") {
    const auto p = EquationParams::integrable();
    auto cp = sweep_member(16);
    const auto c = separation_curve(cp, p, times, 1.0 / 64);
    const double low_gap = 2.0 * cp.Lambda_amp * std::pow(cp.lambda, -0.5) * std::sqrt(2.0 * kPhiNormSquared);
    CHECK(c.initial_separation == Approx(low_gap).epsilon(1e-6));
    for (std::size_t i = 1; i < times.size(); ++i) {
      CHECK(c.separation[i] >= 0.5 * c.envelope[i]);
      // The low-part gap and the carrier gap are orthogonal in H^s.
      const double expected = std::hypot(low_gap, c.envelope[i]);
      CHECK(c.separation[i] == Approx(expected).epsilon(0.1));
    }
    // L^2 is conserved by the integrable preset.
    for (double v : c.l2_plus) CHECK(v == Approx(c.l2_plus.front()).epsilon(1e-9));
    for (double v : c.l2_minus) CHECK(v == Approx(c.l2_minus.front()).epsilon(1e-9));
    // The pair is symmetric: the base omega does not matter.
    const auto swapped = separation_curve(cp.with_omega(-1), p, {0.5}, 1.0 / 64);
    CHECK(swapped.separation.front() == Approx(c.separation[1]).epsilon(1e-12));
  }
}

TEST_CASE("scaling symmetry", "[counterexample]") {
  const TorusGrid g(40.0, 256);
  const auto u0 = RealField::from_function(g, [](double x) { return 0.05 * std::exp(-x * x / 4.0) * std::cos(x); });

  SECTION("lambda = 1 is the identity") {
    CHECK(testing::max_abs_diff(rescale_solution(u0, 1.0), u0) <= 1e-15);
  }

  SECTION("norm identities") {
    const auto u = testing::random_field(g, 20, 3);
    const auto v = rescale_solution(u, 2.0);
    CHECK(v.l2_norm() == Approx(std::pow(2.0, -1.5) * u.l2_norm()).epsilon(1e-10));
    for (double s : {0.5, 1.0, 2.7})
      CHECK(sobolev_norm(v, dotHs(s)) == Approx(std::pow(2.0, -1.5 - s) * sobolev_norm(u, dotHs(s))).epsilon(1e-10));
    CHECK(testing::max_abs_diff(rescale_solution(v, 2.0, ScaleDirection::down), u) <= 1e-14);
  }

  SECTION("flow commutes with rescaling") {
    const auto p = EquationParams::general();
    const double lam = 2.0, T = 0.02, dt = 1e-4;
    const auto a = rescale_solution(solve_to(to_spectral(u0), p, T, dt), lam);
    // Rescale onto an independent grid (twice the points) before solving.
    const TorusGrid target(lam * g.length(), 2 * g.points());
    const auto v0 = rescale_solution(u0, lam, ScaleDirection::up, target);
    const auto b = solve_to(to_spectral(v0), p, std::pow(lam, 5) * T, std::pow(lam, 5) * dt);
    CHECK(testing::rel_l2_diff(resample(from_spectral(a), target.points()), from_spectral(b)) <= 1e-6);
  }

  SECTION("trajectory variant rescales times") {
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.01;
    cfg.keep_snapshots = true;
    const auto tr = solve(u0, EquationParams::general(), cfg);
    const auto up = rescale_trajectory(tr, 2.0);
    CHECK(up.times.back() == Approx(32.0 * tr.times.back()));
    CHECK(up.snapshots.back().grid().length() == Approx(80.0));
  }

  SECTION("support overflow is rejected") {
    CHECK_THROWS_AS(rescale_solution(u0, 2.0, ScaleDirection::up, TorusGrid(40.0, 256)), InvalidArgument);
    CHECK_THROWS_AS(rescale_solution(u0, 0.0), InvalidArgument);
  }
}
