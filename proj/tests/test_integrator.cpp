#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "hmaps/closed_forms.hpp"
#include "hmaps/errors.hpp"
#include "hmaps/integrator.hpp"
#include "oracles.hpp"

using namespace hmaps;

namespace {

const double kC = std::numbers::sqrt2;
const double kTheta = oracle::pi / 4;

TargetMetric flagship_metric() { return catalog_lookup("ellipsoid", {{"c", kC}}); }
ReductionParams flagship_params() {
  return ReductionParams(0.0, 1.0, 0.125, -std::numbers::sqrt2 / 4, SignaturePair(-1, -1));
}

IntegratorConfig cfg_dt(double dt, StepMethod m = StepMethod::rk4_second_order) {
  IntegratorConfig c;
  c.dt = dt;
  c.method = m;
  return c;
}

// With a = 0, b = 1 the frame coordinate is t = -x, so the closed form in t is
// the family profile at -t... the flagship integrates in t directly with
// R(t) = arccos(cos(theta) sin t) (c^2 - 1 = 1).
double closed_R(double t) { return oracle::ellipsoid_R(kC, kTheta, t); }
double closed_H(double t) { return oracle::ellipsoid_H(kC, kTheta, t); }

}  // namespace

TEST_CASE("flagship matches the closed form through the turning point") {
  const auto m = flagship_metric();
  const auto p = flagship_params();
  auto sol = quadrature_H(m, p, integrate_R(m, p, oracle::pi / 2, -1, {0.0, 3 * oracle::pi / 2},
                                            cfg_dt(1e-3)));
  double eR = 0, eH = 0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    eR = std::max(eR, std::abs(sol.Rs[i] - closed_R(sol.ts[i])));
    eH = std::max(eH, std::abs(sol.Hs[i] - closed_H(sol.ts[i])));
  }
  CHECK(eR <= 1e-6);
  CHECK(eH <= 1e-6);
  REQUIRE(sol.turning_events.size() >= 1);
  CHECK(sol.turning_events[0] == doctest::Approx(oracle::pi / 2).epsilon(1e-6));
  CHECK(sol.ts.front() == 0.0);
  CHECK(sol.ts.back() == 3 * oracle::pi / 2);
  CHECK(sol.Hs[sol.seed_index] == 0.0);
}

TEST_CASE("departure from a simple turning point") {
  const auto m = flagship_metric();
  const auto p = flagship_params();
  const auto sol = integrate_R(m, p, oracle::pi / 4, 1, {0.0, 0.2}, cfg_dt(1e-3));
  CHECK(sol.Rps[0] == 0.0);
  CHECK(sol.Rs[50] > oracle::pi / 4);
}

TEST_CASE("constant phi is free motion and constant B gives linear H") {
  const auto flat = catalog_lookup("flat", {});
  const ReductionParams p(0.0, 1.0, 0.0, 0.0, SignaturePair(-1, -1));
  auto sol = quadrature_H(flat, p, integrate_R(flat, p, 0.3, 1, {0.0, 2.0}, cfg_dt(1e-2)));
  for (std::size_t i = 0; i < sol.size(); ++i) {
    CHECK(sol.Rs[i] == doctest::Approx(0.3 + sol.ts[i]).epsilon(1e-12));
    CHECK(sol.Hs[i] == 0.0);
  }
  const ReductionParams q(0.0, 1.0, 0.0, 0.25, SignaturePair(-1, -1));
  sol = quadrature_H(flat, q, integrate_R(flat, q, 0.3, 1, {0.0, 2.0}, cfg_dt(1e-2)));
  for (std::size_t i = 0; i < sol.size(); ++i) {
    CHECK(sol.Hs[i] == doctest::Approx(-0.5 * sol.ts[i]).epsilon(1e-12));
  }
}

TEST_CASE("drift shrinks with dt at the method order") {
  const auto m = flagship_metric();
  const auto p = flagship_params();
  auto drift = [&](double dt, StepMethod meth) {
    IntegratorConfig c = cfg_dt(dt, meth);
    c.invariant_tol = 1.0;
    return integrate_R(m, p, oracle::pi / 2, -1, {0.0, 4.7}, c).max_drift();
  };
  const double r4 = drift(1e-3, StepMethod::rk4_second_order) /
                    drift(5e-4, StepMethod::rk4_second_order);
  CHECK(r4 >= 8.0);
  const double v = drift(2e-3, StepMethod::velocity_verlet) / drift(1e-3, StepMethod::velocity_verlet);
  CHECK(v == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("time reversal returns to the seed state") {
  const auto m = flagship_metric();
  const auto p = flagship_params();
  const auto fwd = integrate_R(m, p, oracle::pi / 2, -1, {0.0, 2.0}, cfg_dt(1e-3));
  const auto back =
      integrate_state(m, p, fwd.Rs.back(), fwd.Rps.back(), {0.0, 2.0}, cfg_dt(1e-3), 2.0);
  const double scale = std::max(fwd.max_drift(), 1e-15);
  CHECK(std::abs(back.Rs.front() - oracle::pi / 2) <= 10 * scale);
  CHECK(std::abs(back.Rps.front() - fwd.Rps.front()) <= 10 * scale);
}

TEST_CASE("integration failures are reported") {
  const auto m = flagship_metric();
  const auto p = flagship_params();
  CHECK_THROWS_AS(integrate_R(m, p, 0.3, 1, {0, 1}, cfg_dt(1e-3)), ValidationError);

  IntegratorConfig tight = cfg_dt(1e-2, StepMethod::velocity_verlet);
  tight.invariant_tol = 1e-12;
  std::string msg;
  try {
    integrate_R(m, p, oracle::pi / 2, -1, {0, 1}, tight);
  } catch (const NumericalError& e) {
    msg = e.what();
  }
  CHECK(msg.find("drift budget exceeded at t =") != std::string::npos);

  IntegratorConfig few = cfg_dt(1e-3);
  few.max_steps = 10;
  CHECK_THROWS_AS(integrate_R(m, p, oracle::pi / 2, -1, {0, 1}, few), NumericalError);

  // rindler with lambda != 0 falls into R = 0 in finite time
  const auto rind = catalog_lookup("rindler", {});
  const ReductionParams rp(0.0, 1.0, 0.0, 0.5, SignaturePair(1, 1));
  IntegratorConfig loose = cfg_dt(1e-3);
  loose.invariant_tol = 1e6;  // drift grows near R = 0; only the domain edge is under test
  CHECK_THROWS_AS(integrate_R(rind, rp, 1.0, -1, {0, 3}, loose), DomainError);

  CHECK_THROWS_AS(cfg_dt(0.0).validate(), ValidationError);
  CHECK_THROWS_AS(integrate_R(m, p, oracle::pi / 2, 0, {0, 1}, cfg_dt(1e-3)), ValidationError);
  CHECK_THROWS_AS(integrate_R(m, p, oracle::pi / 2, 1, {1, 0}, cfg_dt(1e-3)), ValidationError);
}

TEST_CASE("step method names") {
  CHECK(parse_step_method("rk4") == StepMethod::rk4_second_order);
  CHECK(parse_step_method("verlet") == StepMethod::velocity_verlet);
  CHECK(parse_step_method(to_string(StepMethod::velocity_verlet)) == StepMethod::velocity_verlet);
  CHECK_THROWS_AS(parse_step_method("euler"), ValidationError);
}

TEST_CASE("seed inside the span and interpolation") {
  const auto m = flagship_metric();
  const auto p = flagship_params();
  // seed at t = 0 inside [-1.5, 1.5]
  auto sol = quadrature_H(m, p,
                          integrate_R(m, p, oracle::pi / 2, -1, {-1.5, 1.5}, cfg_dt(1e-3), 0.0));
  CHECK(sol.ts[sol.seed_index] == doctest::Approx(0.0).epsilon(1e-15));
  for (double t : {-1.4321, -0.5, 0.12345, 1.49}) {
    const ProfileSample s = interpolate(sol, t);
    CHECK(s.R == doctest::Approx(closed_R(t)).epsilon(1e-9));
    CHECK(s.H == doctest::Approx(closed_H(t)).epsilon(1e-9).scale(1.0));
  }
  CHECK_THROWS_AS(interpolate(sol, 1.6), ValidationError);
}

TEST_CASE("assembled map geometry") {
  const auto m = flagship_metric();
  const auto p = flagship_params();
  auto sol = quadrature_H(m, p,
                          integrate_R(m, p, oracle::pi / 2, -1, {-1.5, 1.5}, cfg_dt(1e-3), 0.0));
  const Lattice g{-1, 1, -1, 1, 21, 11};
  const MapSample s = assemble_map(sol, p, g);
  REQUIRE(s.points.size() == 21 * 11);
  const MapPoint& o = s.at(10, 5);
  CHECK(o.x == doctest::Approx(0.0));
  CHECK(o.y == doctest::Approx(0.0));
  CHECK(o.R == doctest::Approx(oracle::pi / 2).epsilon(1e-12));
  CHECK(std::abs(o.S) <= 1e-12);
  for (std::size_t iy = 0; iy < 11; ++iy) {
    CHECK(s.at(3, iy).R == s.at(3, 0).R);  // a = 0: R constant along vertical lines
  }
  const Lattice wide{-2, 2, -1, 1, 5, 5};
  CHECK_THROWS_AS(assemble_map(sol, p, wide), ValidationError);

  // a = b = 1 in a Riemannian domain: S - (x + y) constant along y = x + const
  const auto flat = catalog_lookup("flat", {});
  const ReductionParams d(1.0, 1.0, 0.1, 0.05, SignaturePair(-1, -1));
  REQUIRE(phi(flat, d, 0.0) > 0.0);
  auto fs = quadrature_H(flat, d, integrate_R(flat, d, 0.0, 1, {-2.5, 2.5}, cfg_dt(1e-3), 0.0));
  const MapSample diag = assemble_map(fs, d, Lattice{-1, 1, -1, 1, 9, 9});
  for (std::size_t k = 0; k + 1 < 9; ++k) {
    const MapPoint& u = diag.at(k, k);
    const MapPoint& v = diag.at(k + 1, k + 1);
    CHECK(u.t == doctest::Approx(v.t).scale(1.0));
    CHECK(u.S - (u.x + u.y) == doctest::Approx(v.S - (v.x + v.y)).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("numeric solutions reproduce the other families") {
  SUBCASE("hyperboloid") {
    const ClosedFormMap map = hyperboloid_map(kC, 1.0, 0.0, 1.0);
    const TargetMetric m = map.target();
    const FirstIntegrals k = map.first_integrals_at(0.0);
    const ReductionParams p(map.a(), map.b(), k.kappa, k.lambda, map.sig());
    const ProfileJet j0 = map.profile(0.0);
    auto sol = quadrature_H(m, p,
                            integrate_R(m, p, j0.R, j0.Rt < 0 ? -1 : 1, {-0.6, 0.6}, cfg_dt(1e-3), 0.0));
    double eR = 0, eH = 0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
      const ProfileJet j = map.profile(sol.ts[i]);
      eR = std::max(eR, std::abs(sol.Rs[i] - j.R));
      eH = std::max(eH, std::abs(sol.Hs[i] - (j.H - j0.H)));
    }
    CHECK(eR <= 1e-6);
    CHECK(eH <= 1e-6);
  }
  SUBCASE("mixed") {
    const ClosedFormMap map = mixed_map(oracle::pi / 6, 1);
    const TargetMetric m = map.target();
    const double t0 = 0.5;
    const FirstIntegrals k = map.first_integrals_at(t0);
    const ReductionParams p(map.a(), map.b(), k.kappa, k.lambda, map.sig());
    const ProfileJet j0 = map.profile(t0);
    auto sol = quadrature_H(m, p, integrate_R(m, p, j0.R, 1, {0.2, 2.0}, cfg_dt(1e-3), t0));
    double eR = 0, eH = 0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
      const ProfileJet j = map.profile(sol.ts[i]);
      eR = std::max(eR, std::abs(sol.Rs[i] - j.R));
      eH = std::max(eH, std::abs(sol.Hs[i] - (j.H - j0.H)));
    }
    CHECK(eR <= 1e-6);
    CHECK(eH <= 1e-6);
  }
}
