#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "hmaps/closed_forms.hpp"
#include "hmaps/errors.hpp"
#include "hmaps/wave.hpp"
#include "oracles.hpp"

using namespace hmaps;

namespace {

struct ConstantMap final : MapEvaluator {
  double r, s;
  ConstantMap(double r0, double s0) : r(r0), s(s0) {}
  MapValue eval(double, double) const override { return {r, s}; }
  bool has_analytic_derivatives() const override { return true; }
  MapJet derivs(double, double) const override {
    MapJet j;
    j.R = r;
    j.S = s;
    return j;
  }
};

WaveEvolveConfig cfg_for(double dx, double T) {
  WaveEvolveConfig c;
  c.dx = dx;
  c.T = T;
  return c;
}

}  // namespace

TEST_CASE("mixed map evolution converges at second order") {
  const auto map = mixed_map(oracle::pi / 6, 1);
  const auto m = map.target();
  const WaveResult coarse = wave_evolve(m, map, cfg_for(0.02, 1.0), {-1, 1});
  const WaveResult fine = wave_evolve(m, map, cfg_for(0.01, 1.0), {-1, 1});
  CHECK(coarse.chart == WaveChart::pole);
  REQUIRE(coarse.pole);
  CHECK(*coarse.pole == 0.0);
  CHECK(fine.steps == 200);
  CHECK(fine.dy == doctest::Approx(0.005));
  CHECK(coarse.deviation_metric / fine.deviation_metric == doctest::Approx(4.0).epsilon(0.5 / 4));
  CHECK(fine.deviation_metric <= 1e-4);
  CHECK(fine.max_dR <= 1e-2);
  REQUIRE(fine.R.size() == fine.xs.size());
  CHECK(fine.R.front() == doctest::Approx(fine.R_ref.front()).epsilon(1e-12));
}

TEST_CASE("hyperboloid evolution converges at second order") {
  const auto map = hyperboloid_map(std::numbers::sqrt2, 1.0, 0, 1);
  const auto m = map.target();
  const WaveResult coarse = wave_evolve(m, map, cfg_for(0.02, 0.5), {-0.6, 0.6});
  const WaveResult fine = wave_evolve(m, map, cfg_for(0.01, 0.5), {-0.6, 0.6});
  CHECK(coarse.chart == WaveChart::warped);
  const double ratio = coarse.deviation_metric / fine.deviation_metric;
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.5 / 4));
  // deviation <= C dx^2 with the same C at both resolutions
  CHECK(fine.deviation_metric / (0.01 * 0.01) <= 1.1 * coarse.deviation_metric / (0.02 * 0.02));
}

TEST_CASE("constant data on a flat target is stationary") {
  const auto m = catalog_lookup("minkowski", {});
  const ConstantMap c(0.3, 0.2);
  const WaveResult r = wave_evolve(m, c, cfg_for(0.05, 1.0), {-1, 1});
  for (std::size_t i = 0; i < r.xs.size(); ++i) {
    CHECK(r.R[i] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(r.S[i] == doctest::Approx(0.2).epsilon(1e-14));
  }
  CHECK(r.deviation_coord <= 1e-14);
}

TEST_CASE("configuration errors") {
  WaveEvolveConfig c;
  c.cfl = 1.5;
  std::string msg;
  try {
    c.validate();
  } catch (const NumericalError& e) {
    msg = e.what();
  }
  CHECK(msg.find("CFL violation") != std::string::npos);
  c.cfl = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = WaveEvolveConfig{};
  c.T = -1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = WaveEvolveConfig{};
  c.sweeps = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  const ConstantMap k(0.3, 0.2);
  CHECK_THROWS_AS(wave_evolve(catalog_lookup("minkowski", {}), k, WaveEvolveConfig{}, {1, -1}),
                  ValidationError);
  CHECK(parse_wave_chart("pole") == WaveChart::pole);
  CHECK(parse_wave_chart(to_string(WaveChart::warped)) == WaveChart::warped);
  CHECK_THROWS_AS(parse_wave_chart("polar"), ValidationError);
}

TEST_CASE("warped chart breaks down where B vanishes") {
  const auto map = mixed_map(oracle::pi / 6, 1);
  WaveEvolveConfig c = cfg_for(0.02, 1.0);
  c.chart = WaveChart::warped;
  CHECK_THROWS_AS(wave_evolve(map.target(), map, c, {-1, 1}), NumericalError);
  // no smooth pole on a del2 = +1 target
  const auto hyp = hyperboloid_map(std::numbers::sqrt2, 1.0, 0, 1);
  c.chart = WaveChart::pole;
  CHECK_THROWS(wave_evolve(hyp.target(), hyp, c, {-0.6, 0.6}));
}

TEST_CASE("smooth poles") {
  const auto mixed = catalog_lookup("tanh_warp", {{"del2", -1}});
  REQUIRE(smooth_poles(mixed).size() == 1);
  CHECK(smooth_poles(mixed)[0] == 0.0);
  CHECK(smooth_poles(catalog_lookup("tanh_warp", {{"del2", 1}})).empty());
  CHECK(smooth_poles(catalog_lookup("flat", {})).empty());
  const auto polar = smooth_poles(catalog_lookup("flat_polar", {}));
  REQUIRE(polar.size() == 1);
  CHECK(polar[0] == 0.0);
  // ellipsoid: A = 1 and B'' = 2 at both R = 0 and R = pi
  const auto ell = smooth_poles(catalog_lookup("ellipsoid", {{"c", 2.0}}));
  CHECK(ell.size() == 2);
}
