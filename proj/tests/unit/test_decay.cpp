#include <cmath>
#include <numbers>

#include "core/decay.hpp"
#include "core/quadrature.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace nsprofile;
using namespace nsprofile::test;

TEST_CASE("time grids and windows") {
  const RealVec g = geometric_grid(16.0, 16384.0, 11);
  REQUIRE(g.size() == 11);
  CHECK(g.front() == 16.0);
  CHECK(g.back() == 16384.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] / g[i - 1] == doctest::Approx(2.0).epsilon(1e-14));
  const RealVec l = linear_grid(0.0, 24.0, 41);
  CHECK(l[1] == doctest::Approx(0.6));
  CHECK(l.back() == 24.0);
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(linear_grid(1.0, 1.0, 5), std::invalid_argument);

  const FitWindow w = tail_window(11);
  CHECK(w.begin == 5);
  CHECK(w.end == 11);
  CHECK(tail_window(20).size() == 10);
  CHECK(tail_window(4).size() == 4);
}

TEST_CASE("log-log fits") {
  const RealVec t = geometric_grid(1.0, 1e4, 30);
  SUBCASE("exact power law") {
    DecaySeries s{t, {}, "p"};
    for (double x : t) s.values.push_back(3.0 / x);
    const DecayFit f = fit_loglog(s, full_window(t.size()));
    CHECK(f.slope == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("log-periodic perturbation") {
    DecaySeries s{t, {}, "p"};
    for (double x : t) s.values.push_back(2.0 / x * (1.0 + 0.01 * std::sin(std::log(x))));
    CHECK(std::abs(fit_loglog(s, full_window(t.size())).slope + 1.0) <= 0.02);
  }
  SUBCASE("constant series") {
    DecaySeries s{t, RealVec(t.size(), 0.4), "c"};
    CHECK(fit_loglog(s, full_window(t.size())).slope == doctest::Approx(0.0));
  }
  SUBCASE("bad input") {
    DecaySeries s{t, RealVec(t.size(), 1.0), "c"};
    s.values[3] = 0.0;
    CHECK_THROWS_AS(fit_loglog(s, full_window(t.size())), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog(s, FitWindow{5, 6}), std::invalid_argument);
  }
  SUBCASE("semilog fit of an exponential") {
    const RealVec lt = linear_grid(0.0, 10.0, 21);
    DecaySeries s{lt, {}, "e"};
    for (double x : lt) s.values.push_back(5.0 * std::exp(-0.7 * x));
    const DecayFit f = fit_semilog(s, full_window(lt.size()));
    CHECK(f.slope == doctest::Approx(-0.7).epsilon(1e-13));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("velocity rate preconditions") {
  CHECK_THROWS_AS(require_small_momentum(gaussian({0.1, 0.0}, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(require_small_momentum(gaussian({0.2, 0.0}, 1.0)), std::invalid_argument);
  CHECK_NOTHROW(require_small_momentum(gaussian({0.1, 0.0}, 1.0)));
  const RealVec t = geometric_grid(16.0, 1024.0, 8);
  CHECK_THROWS_AS(verify_sandwich(params(1, 1, 1, 2), gaussian({0.1, 0.0}, 0.0), t, QuadratureSpec{}),
                  std::invalid_argument);
}

TEST_CASE("velocity rate is equivariant under data scaling") {
  const ModelParams p = params(1, 1, 1, 2);
  const RealVec t = geometric_grid(16.0, 2048.0, 8);
  const RateReport a = verify_velocity_rate(p, gaussian({0.0, 0.0}, 1.0), t, QuadratureSpec{});
  const RateReport b = verify_velocity_rate(p, gaussian({0.0, 0.0}, 3.0), t, QuadratureSpec{});
  CHECK(a.pass);
  CHECK(b.fit.slope == doctest::Approx(a.fit.slope).epsilon(1e-9));
  CHECK(b.fit.intercept - a.fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-9));
}

TEST_CASE("sandwich") {
  const ModelParams p = params(1, 1, 1, 2);
  const RealVec t = geometric_grid(16.0, 2048.0, 8);
  SUBCASE("scale equivariance") {
    const SandwichReport a = verify_sandwich(p, gaussian({0.05, 0.0}, 1.0), t, QuadratureSpec{});
    const SandwichReport b = verify_sandwich(p, gaussian({0.1, 0.0}, 2.0), t, QuadratureSpec{});
    CHECK(a.pass);
    CHECK(b.plateau_min == doctest::Approx(2.0 * a.plateau_min).epsilon(1e-9));
    CHECK(b.plateau_max == doctest::Approx(2.0 * a.plateau_max).epsilon(1e-9));
    CHECK(b.ratio == doctest::Approx(a.ratio).epsilon(1e-9));
  }
  SUBCASE("lower plateau dominates the triangle-inequality chain") {
    // ||v|| >= |Q0| sqrt(I) - ||P0 heat|| - ||projected heat|| - ||cosine term|| - ||remainder||,
    // all scaled by t^{n/4}; t ||P0 e^{-alpha r^2 t}||^2 = |P0|^2 pi/(2 alpha) for n = 2
    const InitialData d = gaussian({0.05, 0.0}, 1.0);
    const SandwichReport s = verify_sandwich(p, d, t, QuadratureSpec{});
    const Lemma31Report l = verify_lemma31(p, d.amplitude_v, t, QuadratureSpec{});
    const ProfileErrorReport e = verify_profile_error(p, d, t, QuadratureSpec{});
    double floor = std::sqrt(l.item2.plateau_min) - 0.05 * std::sqrt(std::numbers::pi / 2.0) -
                   std::sqrt(l.item1.plateau_max) - std::sqrt(l.item3.plateau_max);
    double rem = 0.0;
    for (std::size_t i = s.window.begin; i < s.window.end; ++i)
      rem = std::max(rem, std::sqrt(e.residual_sq[i]) * std::sqrt(t[i]));
    floor -= rem;
    CHECK(floor > 0.0);
    CHECK(s.plateau_min >= floor);
  }
}

TEST_CASE("profile error leads the solution rate") {
  const ModelParams p = params(1, 1, 1, 2);
  const RealVec t = geometric_grid(16.0, 2048.0, 8);
  const InitialData d = gaussian({0.1, 0.0}, 1.0);
  const ProfileErrorReport e = verify_profile_error(p, d, t, QuadratureSpec{});
  const RateReport r = verify_velocity_rate(p, d, t, QuadratureSpec{});
  CHECK(e.pass);
  CHECK(0.5 * e.fit.slope < r.fit.slope);
}

TEST_CASE("item 1 plateau for a unit momentum") {
  const ModelParams p = params(1, 1, 1, 2);
  const RealVec t = geometric_grid(10.0, 1000.0, 8);
  const Lemma31Report l = verify_lemma31(p, RealVec{1.0, 0.0}, t, QuadratureSpec{});
  // angular mean of cos^2 (1/2) times int e^{-2 r^2 t} d xi = pi/(2t)
  CHECK(l.item1.plateau_min == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-8));
  CHECK(l.item2.pass);
  CHECK(l.witness_pass);
  CHECK_THROWS_AS(verify_lemma31(p, RealVec{0.0, 0.0}, t, QuadratureSpec{}), std::invalid_argument);
}

TEST_CASE("high-frequency energy") {
  const ModelParams p = params(1, 1, 1, 2);
  const InitialData d = gaussian({0.1, 0.0}, 1.0);
  const RealVec t = linear_grid(0.0, 24.0, 41);
  const HighFreqReport h = highfreq_energy(p, d, t, QuadratureSpec{});
  CHECK(h.non_increasing);
  CHECK(h.eta > 0.0);
  CHECK(h.komornik_hypothesis);
  CHECK(h.komornik_conclusion);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] >= 10.0) CHECK(h.series.values[i] <= 1e-3 * h.low_energy[i]);

  QuadratureSpec fine;
  fine.base_panels *= 2;
  fine.angular_nodes *= 2;
  const HighFreqReport g = highfreq_energy(p, d, t, fine);
  CHECK(g.eta == doctest::Approx(h.eta).epsilon(0.1));
}

TEST_CASE("oracle grid straddles the double root") {
  const ModelParams p = params(1, 1, 1, 2);
  const RealVec r = oracle_radii(p, 0.05, 5.0, 10);
  REQUIRE(r.size() == 10);
  bool below = false, above = false;
  for (double x : r) {
    below = below || x == 0.99;
    above = above || x == 1.01;
  }
  CHECK(below);
  CHECK(above);
  const OracleReport o = oracle_check(p, gaussian({0.1, 0.0}, 1.0), r, geometric_grid(0.1, 5.0, 4), 1e-3, 42);
  CHECK(o.points.size() == 40);
  CHECK(o.max_rel_err <= 1e-8);
}

TEST_CASE("per-frequency energy balance") {
  const ModelParams p = params(1, 0.5, 1.3, 3);
  const InitialData d = gaussian({0.2, -0.1, 0.05}, 0.9, 1.1);
  for (double r : {0.1, 0.8, 2.5}) {
    const RealVec xi{0.6 * r, 0.0, 0.8 * r};
    const EnergyBalance e = energy_balance(p, d, xi, 0.5, 12.0);
    CHECK(e.rel_err <= 1e-6);
    CHECK(e.lhs > 0.0);
  }
  CHECK_THROWS_AS(energy_balance(p, d, RealVec{0.1, 0.0, 0.0}, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("unit uniform") {
  CHECK(unit_uniform(0) == 0.0);
  CHECK(unit_uniform(~0ULL) < 1.0);
  CHECK(unit_uniform(1ULL << 63) == 0.5);
}
