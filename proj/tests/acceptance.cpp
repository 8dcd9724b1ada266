// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hmaps/closed_forms.hpp"
#include "hmaps/errors.hpp"
#include "hmaps/integrator.hpp"
#include "hmaps/reduction.hpp"
#include "hmaps/run.hpp"
#include "hmaps/verifier.hpp"
#include "hmaps/wave.hpp"
#include "oracles.hpp"

using namespace hmaps;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

TargetMetric flagship_metric() { return catalog_lookup("ellipsoid", {{"c", kSqrt2}}); }

ReductionParams flagship_params(double dk = 0.0) {
  return ReductionParams(0.0, 1.0, 0.125 + dk, -kSqrt2 / 4, SignaturePair(-1, -1));
}

ODESolution flagship_run(double dt) {
  IntegratorConfig c;
  c.dt = dt;
  const auto m = flagship_metric();
  const auto p = flagship_params();
  return quadrature_H(m, p, integrate_R(m, p, kPi / 2, -1, {0.0, 4.7}, c));
}

Outcome c1_round_trip() {
  const auto t0 = std::chrono::steady_clock::now();
  const ODESolution sol = flagship_run(1e-3);
  const double secs = seconds_since(t0);
  const double th = kPi / 4;
  double eR = 0, eH = 0;
  for (std::size_t i = 0; i < sol.size(); ++i) {
    eR = std::max(eR, std::abs(sol.Rs[i] - oracle::ellipsoid_R(kSqrt2, th, sol.ts[i])));
    eH = std::max(eH, std::abs(sol.Hs[i] - oracle::ellipsoid_H(kSqrt2, th, sol.ts[i])));
  }
  // closed-form turning points cos t = 0 inside [0, 4.7]: only pi/2
  const bool events = sol.turning_events.size() == 1 &&
                      std::abs(sol.turning_events[0] - kPi / 2) < 1e-3;
  return {eR <= 1e-6 && eH <= 1e-6 && events && secs < 1.0,
          fmt("sup|dR| = %.3g, sup|dH| = %.3g, turning events = %zu, %.3f s", eR, eH,
              sol.turning_events.size(), secs)};
}

Outcome c2_euler_lagrange() {
  struct Case {
    const char* name;
    ClosedFormMap map;
    Interval box;
  };
  const Case cases[] = {
      {"ellipsoid", ellipsoid_map(kSqrt2, kPi / 4, 0, 1), {-1, 1}},
      {"hyperboloid", hyperboloid_map(kSqrt2, 1.0, 0, 1), {-0.6, 0.6}},
      {"mixed", mixed_map(kPi / 6, 1), {-1, 1}},
  };
  bool ok = true;
  std::ostringstream d;
  for (const Case& c : cases) {
    GridSpec g;
    g.x = c.box;
    g.y = c.box;
    const TargetMetric m = c.map.target();
    const ResidualReport an = el_residual(c.map, m, c.map.sig(), g);
    g.fd_h = 1e-2;
    const ConvergenceReport conv = el_convergence(c.map, m, c.map.sig(), g);
    const double sup = std::max(an.sup_E1, an.sup_E2);
    const bool pass = sup <= 1e-10 && std::abs(conv.ratio_E1 - 4.0) <= 0.5 &&
                      std::abs(conv.ratio_E2 - 4.0) <= 0.5;
    ok = ok && pass;
    if (d.tellp() > 0) d << "; ";
    d << c.name << ": analytic " << fmt("%.2g", sup) << ", FD ratios "
      << fmt("%.3f/%.3f", conv.ratio_E1, conv.ratio_E2);
  }
  return {ok, d.str()};
}

Outcome c3_first_integrals() {
  const auto m = flagship_metric();
  const ODESolution sol = flagship_run(1e-3);
  const ResidualReport r = first_integral_residual(m, flagship_params(), sol);
  const ResidualReport p = first_integral_residual(m, flagship_params(1e-3), sol);
  return {r.sup_G1 <= 1e-8 && r.sup_G2 <= 1e-8 && p.sup_G1 >= 4e-3 - 1e-8,
          fmt("sup|G1| = %.3g, sup|G2| = %.3g, perturbed sup|G1| = %.6g", r.sup_G1, r.sup_G2,
              p.sup_G1)};
}

Outcome c4_drift() {
  const double d1 = flagship_run(1e-3).max_drift();
  const double d2 = flagship_run(5e-4).max_drift();
  return {d1 <= 1e-8 && d1 / d2 >= 8.0,
          fmt("max drift %.3g (dt=1e-3), %.3g (dt=5e-4), ratio %.2f", d1, d2, d1 / d2)};
}

Outcome c5_curvature() {
  const double c = kSqrt2;
  const auto m = catalog_lookup("ellipsoid", {{"c", c}});
  const double K = gauss_curvature(m, kPi / 2);
  auto analytic = [c](double r) {
    const double q = c * c * std::sin(r) * std::sin(r) + std::cos(r) * std::cos(r);
    return c * c / (q * q);
  };
  const double amb = oracle::ellipsoid_K_ambient(c, kPi / 2);
  bool ok = std::abs(K - 0.5) <= 1e-9 && std::abs(K - analytic(kPi / 2)) <= 1e-9 &&
            std::abs(K - amb) <= 1e-6;
  std::ostringstream d;
  d << fmt("K(pi/2) = %.12g, ambient %.12g; ", K, amb);
  double worst = 0;
  for (const CatalogEntry& e : catalog()) {
    if (e.table != 1) continue;
    const TargetMetric t = catalog_lookup(e.name, e.listing_defaults);
    const Interval w = t.sample_window();
    const CurvatureClass k = curvature_classify(t, linspace(w.lo, w.hi, 33));
    worst = std::max(worst, k.spread);
    if (!k.constant || k.spread > 1e-9) {
      ok = false;
      d << e.name << " not constant; ";
    }
  }
  d << fmt("constant-curvature entries: max spread %.2g; ", worst);
  for (const char* name : {"ellipsoid", "torus", "paraboloid", "cigar", "schwarzschild_2d"}) {
    const CatalogEntry* entry = nullptr;
    for (const CatalogEntry& e : catalog()) {
      if (e.name == name) entry = &e;
    }
    const TargetMetric t = catalog_lookup(name, entry->listing_defaults);
    const Interval w = t.sample_window();
    if (curvature_classify(t, linspace(w.lo, w.hi, 33)).constant) {
      ok = false;
      d << name << " not variable; ";
    }
  }
  d << "variable: ellipsoid torus paraboloid cigar schwarzschild_2d";
  return {ok, d.str()};
}

Outcome c6_degeneracy() {
  bool rejected = false;
  std::string msg;
  try {
    ReductionParams(1.0, 1.0, 0.0, 0.0, SignaturePair(1, 1));
  } catch (const ValidationError& e) {
    rejected = true;
    msg = e.what();
  }
  const std::vector<std::string> args{
      "solve", "--metric", "ellipsoid", "--c", "1.41421356", "--eps2", "1",    "--del2",
      "-1",    "--a",      "1",         "--b", "1",          "--kappa", "0.125", "--lambda",
      "-0.35355339", "--r0", "1.57079633", "--sign", "-1", "--t1", "1"};
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {rejected && code == kExitValidation,
          fmt("construction: %s; CLI exit %d", rejected ? "rejected" : "accepted", code)};
}

Outcome c7_wave() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto map = mixed_map(kPi / 6, 1);
  const auto m = map.target();
  WaveEvolveConfig c;
  c.T = 1.0;
  c.cfl = 0.5;
  c.dx = 1.0 / 100;
  const WaveResult coarse = wave_evolve(m, map, c, {-1, 1});
  c.dx = 1.0 / 200;
  const WaveResult fine = wave_evolve(m, map, c, {-1, 1});
  const double secs = seconds_since(t0);
  const double ratio = coarse.deviation_metric / fine.deviation_metric;
  return {std::abs(ratio - 4.0) <= 1.0 && fine.deviation_metric <= 1e-3 && secs < 10.0,
          fmt("deviation %.3g (dx=1/100), %.3g (dx=1/200), ratio %.3f, chart %s, %.2f s",
              coarse.deviation_metric, fine.deviation_metric, ratio, to_string(fine.chart), secs)};
}

Outcome c8_self_consistency() {
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto entries = catalog();
  int accepted = 0, tries = 0;
  double worst = 0;
  while (accepted < 100 && tries < 100000) {
    ++tries;
    const CatalogEntry& e = entries[std::size_t(unit(rng) * entries.size()) % entries.size()];
    const TargetMetric m = catalog_lookup(e.name, e.listing_defaults);
    const int eps2 = unit(rng) < 0.5 ? -1 : 1;
    const double a = 2 * u(rng), b = 2 * u(rng);
    if (std::abs(b * b - eps2 * a * a) < 0.1 || a * a + b * b < 0.1) continue;
    const double kappa = u(rng), lambda = u(rng);
    const Interval w = m.sample_window();
    const double r0 = w.lo + (w.hi - w.lo) * unit(rng);
    if (!m.in_domain(r0) || m.near_singular(r0, 1e-6) || std::abs(m.b(r0)) < 1e-6) continue;
    const SignaturePair sig(eps2, m.del2());
    const ReductionParams p(a, b, kappa, lambda, sig);
    const double ph = phi(m, p, r0);
    if (!(ph > 0.0)) continue;
    const FirstIntegrals k =
        recover_first_integrals(m, sig, a, b, r0, std::sqrt(ph), h_prime(m, p, r0));
    const double scale = std::max({std::abs(kappa), std::abs(lambda)});
    worst = std::max({worst, std::abs(k.kappa - kappa) / scale,
                      std::abs(k.lambda - lambda) / scale});
    ++accepted;
  }
  return {accepted == 100 && worst <= 1e-10,
          fmt("%d tuples (%d draws), max relative error %.3g", accepted, tries, worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 round trip (ellipsoid)", c1_round_trip},
      {"2 Euler-Lagrange residuals", c2_euler_lagrange},
      {"3 first integrals", c3_first_integrals},
      {"4 invariant drift", c4_drift},
      {"5 curvature", c5_curvature},
      {"6 degeneracy gate", c6_degeneracy},
      {"7 wave persistence", c7_wave},
      {"8 recover round trip", c8_self_consistency},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
