#include "hmaps/target_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "hmaps/errors.hpp"

namespace hmaps {

namespace {

constexpr double kPi = std::numbers::pi;

void require_sign(int s, const char* what) {
  if (s != 1 && s != -1) {
    std::ostringstream os;
    os << what << " must be -1 or +1, got " << s;
    throw ValidationError(os.str());
  }
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

RadialProfile profile(ScalarFn v, ScalarFn d, ScalarFn dd, Interval dom = {}) {
  return RadialProfile(std::move(v), std::move(d), std::move(dd), dom);
}

RadialProfile square_profile() {
  return profile([](double r) { return r * r; }, [](double r) { return 2.0 * r; },
                 [](double) { return 2.0; });
}

RadialProfile sinh2_profile() {
  return profile([](double r) { return std::sinh(r) * std::sinh(r); },
                 [](double r) { return std::sinh(2.0 * r); },
                 [](double r) { return 2.0 * std::cosh(2.0 * r); });
}

RadialProfile cosh2_profile() {
  return profile([](double r) { return std::cosh(r) * std::cosh(r); },
                 [](double r) { return std::sinh(2.0 * r); },
                 [](double r) { return 2.0 * std::cosh(2.0 * r); });
}

// tanh^2(R) scaled by s.
RadialProfile tanh2_profile(double s) {
  return profile(
      [s](double r) {
        const double th = std::tanh(r);
        return s * th * th;
      },
      [s](double r) {
        const double th = std::tanh(r);
        const double sech2 = 1.0 - th * th;
        return 2.0 * s * th * sech2;
      },
      [s](double r) {
        const double th = std::tanh(r);
        const double sech2 = 1.0 - th * th;
        return 2.0 * s * (sech2 * sech2 - 2.0 * th * th * sech2);
      });
}

// Ellipsoid radial factor c^2 sin^2 R + cos^2 R = 1 + (c^2 - 1) sin^2 R.
RadialProfile ellipsoid_a_profile(double c) {
  const double k = c * c - 1.0;
  return profile([k](double r) { return 1.0 + k * std::sin(r) * std::sin(r); },
                 [k](double r) { return k * std::sin(2.0 * r); },
                 [k](double r) { return 2.0 * k * std::cos(2.0 * r); });
}

RadialProfile sin2_profile() {
  return profile([](double r) { return std::sin(r) * std::sin(r); },
                 [](double r) { return std::sin(2.0 * r); },
                 [](double r) { return 2.0 * std::cos(2.0 * r); });
}

const ParamList kNoParams{};

std::vector<CatalogEntry> build_catalog() {
  return {
      {"flat", "Flat plane (Cartesian): dR^2 + dS^2", 1, {}, {}, {}},
      {"flat_polar", "Flat plane (polar): dR^2 + R^2 dS^2", 1, {}, {}, {}},
      {"sphere", "Sphere of radius a: dR^2 + cos^2(R/a) dS^2", 1, {"a"}, {}, {{"a", 1.0}}},
      {"hyperbolic", "Hyperbolic plane: dR^2 + sinh^2(R) dS^2", 1, {}, {}, {}},
      {"minkowski", "Minkowski: dR^2 - dS^2", 1, {}, {}, {}},
      {"rindler", "Rindler wedge: dR^2 - R^2 dS^2", 1, {}, {}, {}},
      {"de_sitter", "2D de Sitter: dR^2 - cosh^2(R) dS^2", 1, {}, {}, {}},
      {"anti_de_sitter", "2D anti-de Sitter: dR^2 - sinh^2(R) dS^2", 1, {}, {}, {}},
      {"twisted", "Twisted: e^{2R} (dR^2 - dS^2)", 1, {}, {}, {}},
      {"power_warp", "Power-law warp: dR^2 + R^{2p} dS^2, p != 0, 1", 2, {"p"}, {}, {{"p", 2.0}}},
      {"paraboloid", "Paraboloid: (1 + R^2) dR^2 + R^2 dS^2", 2, {}, {}, {}},
      {"torus", "Torus: r^2 dR^2 + (R0 + r cos R)^2 dS^2, 0 < r < R0", 2, {"r", "R0"}, {},
       {{"r", 1.0}, {"R0", 2.0}}},
      {"ellipsoid", "Ellipsoid: (c^2 sin^2 R + cos^2 R) dR^2 + sin^2 R dS^2, c > 1", 2, {"c"},
       {}, {{"c", std::numbers::sqrt2}}},
      {"schwarzschild_2d", "2D Schwarzschild: (1-2M/R)^{-1} dR^2 - (1-2M/R) dS^2, R > 2M", 2,
       {"M"}, {}, {{"M", 1.0}}},
      {"cigar", "Semi-infinite cigar: (dR^2 - tanh^2 R dS^2)/2", 2, {}, {}, {}},
      {"elliptic_hyperboloid",
       "Elliptic hyperboloid: (c^2 sin^2 R + cos^2 R) dR^2 - sin^2 R dS^2, c > 1", 2, {"c"}, {},
       {{"c", std::numbers::sqrt2}}},
      {"tanh_warp", "Mixed-signature target: dR^2 - del2 tanh^2 R dS^2", 0, {"del2"}, {},
       {{"del2", -1.0}}},
      {"custom", "Warped product: dR^2 - del2 f(R)^2 dS^2, f = f0 + f1 R + f2 R^2 on (r_min, r_max)",
       0, {"del2", "f0", "r_min", "r_max"}, {{"f1", 0.0}, {"f2", 0.0}},
       {{"del2", -1.0}, {"f0", 1.0}, {"f1", 0.5}, {"r_min", 0.0}, {"r_max", 3.0}}},
  };
}

const std::vector<CatalogEntry>& catalog_storage() {
  static const std::vector<CatalogEntry> entries = build_catalog();
  return entries;
}

class ParamReader {
 public:
  ParamReader(const CatalogEntry& entry, const ParamList& given) : entry_(entry), given_(given) {
    for (const auto& [key, value] : given) {
      const bool known =
          std::find(entry.required.begin(), entry.required.end(), key) != entry.required.end() ||
          entry.optional.contains(key);
      if (!known) {
        std::ostringstream os;
        os << "unknown parameter '" << key << "' for metric '" << entry.name << "'";
        if (!entry.required.empty() || !entry.optional.empty()) {
          os << " (accepted:";
          for (auto r : entry.required) os << ' ' << r;
          for (const auto& [k, v] : entry.optional) os << ' ' << k;
          os << ')';
        }
        throw ValidationError(os.str());
      }
      if (!std::isfinite(value)) {
        throw ValidationError("parameter '" + key + "' for metric '" + std::string(entry.name) +
                              "' must be finite");
      }
    }
    for (auto r : entry.required) {
      if (!given.contains(r)) {
        throw ValidationError("metric '" + std::string(entry.name) + "' requires parameter '" +
                              std::string(r) + "'");
      }
    }
  }

  double get(std::string_view key) const {
    if (auto it = given_.find(key); it != given_.end()) return it->second;
    if (auto it = entry_.optional.find(key); it != entry_.optional.end()) return it->second;
    throw ValidationError("missing parameter '" + std::string(key) + "'");
  }

  [[noreturn]] void reject(std::string_view constraint) const {
    std::ostringstream os;
    os << "invalid parameters for metric '" << entry_.name << "': requires " << constraint;
    for (const auto& [k, v] : given_) os << "; got " << k << " = " << fmt_double(v);
    throw ValidationError(os.str());
  }

  int sign(std::string_view key) const {
    const double v = get(key);
    if (v != 1.0 && v != -1.0) reject(std::string(key) + " in {-1, +1}");
    return static_cast<int>(v);
  }

 private:
  const CatalogEntry& entry_;
  const ParamList& given_;
};

TargetMetric make(const CatalogEntry& e, RadialProfile A, RadialProfile B, int del2, Interval dom,
                  std::vector<double> singular, Interval window, const ParamList& params) {
  return TargetMetric(std::string(e.name), std::move(A), std::move(B), del2, dom,
                      std::move(singular), window, params);
}

}  // namespace

SignaturePair::SignaturePair(int eps2, int del2) : eps2_(eps2), del2_(del2) {
  require_sign(eps2, "eps2");
  require_sign(del2, "del2");
}

RadialProfile::RadialProfile(ScalarFn value, ScalarFn deriv, ScalarFn second_deriv,
                             Interval domain)
    : value_(std::move(value)),
      deriv_(std::move(deriv)),
      second_(std::move(second_deriv)),
      domain_(domain) {
  if (!value_ || !deriv_ || !second_) {
    throw ValidationError("radial profile needs value, first and second derivative");
  }
}

RadialProfile RadialProfile::constant(double c) {
  return RadialProfile([c](double) { return c; }, [](double) { return 0.0; },
                       [](double) { return 0.0; }, Interval{});
}

TargetMetric::TargetMetric(std::string name, RadialProfile A, RadialProfile B, int del2,
                           Interval r_domain, std::vector<double> singular_points,
                           Interval sample_window, ParamList params)
    : name_(std::move(name)),
      A_(std::move(A)),
      B_(std::move(B)),
      del2_(del2),
      r_domain_(r_domain),
      singular_(std::move(singular_points)),
      window_(sample_window),
      params_(std::move(params)) {
  require_sign(del2, "del2");
  if (!(r_domain_.lo < r_domain_.hi)) {
    throw ValidationError("metric '" + name_ + "': empty R domain");
  }
  if (!A_.domain().contains(r_domain_) || !B_.domain().contains(r_domain_)) {
    throw ValidationError("metric '" + name_ + "': R domain exceeds the profile domains");
  }
  if (!std::isfinite(window_.lo) || !std::isfinite(window_.hi) || !(window_.lo < window_.hi) ||
      !r_domain_.contains(window_.lo) || !r_domain_.contains(window_.hi)) {
    throw ValidationError("metric '" + name_ + "': sample window must be finite and inside the domain");
  }
  std::sort(singular_.begin(), singular_.end());
}

bool TargetMetric::near_singular(double r, double tol) const {
  return std::any_of(singular_.begin(), singular_.end(), [&](double s) {
    return std::abs(r - s) <= tol * (1.0 + std::abs(s));
  });
}

void TargetMetric::require_regular(double r) const {
  if (!std::isfinite(r) || !in_domain(r)) {
    std::ostringstream os;
    os << "R = " << fmt_double(r) << " is outside the domain (" << r_domain_.lo << ", "
       << r_domain_.hi << ") of metric '" << name_ << "'";
    throw DomainError(os.str());
  }
  if (near_singular(r)) {
    std::ostringstream os;
    os << "R = " << fmt_double(r) << " is a coordinate singularity (B = 0) of metric '" << name_
       << "'";
    throw DomainError(os.str());
  }
}

DomainMetric::DomainMetric(int eps2, ConformalFactor f) : eps2_(eps2), f_(std::move(f)) {
  require_sign(eps2, "eps2");
}

double DomainMetric::conformal_factor(double x, double y) const {
  if (!f_) return 0.0;
  const double v = f_(x, y);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "conformal factor is not finite at (" << x << ", " << y << ")";
    throw NumericalError(os.str());
  }
  return v;
}

std::span<const CatalogEntry> catalog() { return catalog_storage(); }

TargetMetric catalog_lookup(std::string_view name, const ParamList& params) {
  const auto& entries = catalog_storage();
  auto it = std::find_if(entries.begin(), entries.end(),
                         [&](const CatalogEntry& e) { return e.name == name; });
  if (it == entries.end()) {
    std::ostringstream os;
    os << "unknown metric '" << name << "' (known:";
    for (const auto& e : entries) os << ' ' << e.name;
    os << ')';
    throw ValidationError(os.str());
  }
  const CatalogEntry& e = *it;
  const ParamReader p(e, params);
  const auto one = [] { return RadialProfile::constant(1.0); };
  const Interval positive{0.0, kInf};

  if (name == "flat") {
    return make(e, one(), one(), -1, {}, {}, {-2.0, 2.0}, params);
  }
  if (name == "flat_polar") {
    return make(e, one(), square_profile(), -1, positive, {0.0}, {0.5, 5.0}, params);
  }
  if (name == "sphere") {
    const double a = p.get("a");
    if (!(a > 0.0)) p.reject("radius a > 0");
    const double edge = a * kPi / 2.0;
    auto B = profile([a](double r) { return std::cos(r / a) * std::cos(r / a); },
                     [a](double r) { return -std::sin(2.0 * r / a) / a; },
                     [a](double r) { return -2.0 * std::cos(2.0 * r / a) / (a * a); });
    return make(e, one(), std::move(B), -1, {-edge, edge}, {-edge, edge},
                {-0.9 * edge, 0.9 * edge}, params);
  }
  if (name == "hyperbolic") {
    return make(e, one(), sinh2_profile(), -1, positive, {0.0}, {0.1, 3.0}, params);
  }
  if (name == "minkowski") {
    return make(e, one(), one(), 1, {}, {}, {-2.0, 2.0}, params);
  }
  if (name == "rindler") {
    return make(e, one(), square_profile(), 1, positive, {0.0}, {0.1, 3.0}, params);
  }
  if (name == "de_sitter") {
    return make(e, one(), cosh2_profile(), 1, {}, {}, {-2.0, 2.0}, params);
  }
  if (name == "anti_de_sitter") {
    return make(e, one(), sinh2_profile(), 1, positive, {0.0}, {0.1, 3.0}, params);
  }
  if (name == "twisted") {
    auto exp2 = [] {
      return profile([](double r) { return std::exp(2.0 * r); },
                     [](double r) { return 2.0 * std::exp(2.0 * r); },
                     [](double r) { return 4.0 * std::exp(2.0 * r); });
    };
    return make(e, exp2(), exp2(), 1, {}, {}, {-1.0, 1.0}, params);
  }
  if (name == "power_warp") {
    const double pw = p.get("p");
    if (pw == 0.0 || pw == 1.0) p.reject("exponent p not in {0, 1}");
    auto B = profile([pw](double r) { return std::pow(r, 2.0 * pw); },
                     [pw](double r) { return 2.0 * pw * std::pow(r, 2.0 * pw - 1.0); },
                     [pw](double r) { return 2.0 * pw * (2.0 * pw - 1.0) * std::pow(r, 2.0 * pw - 2.0); },
                     positive);
    std::vector<double> sing;
    if (pw > 0.0) sing.push_back(0.0);
    return make(e, one(), std::move(B), -1, positive, std::move(sing), {0.2, 3.0}, params);
  }
  if (name == "paraboloid") {
    auto A = profile([](double r) { return 1.0 + r * r; }, [](double r) { return 2.0 * r; },
                     [](double) { return 2.0; });
    return make(e, std::move(A), square_profile(), -1, positive, {0.0}, {0.1, 3.0}, params);
  }
  if (name == "torus") {
    const double r = p.get("r");
    const double R0 = p.get("R0");
    if (!(r > 0.0 && r < R0)) p.reject("0 < r < R0");
    auto B = profile(
        [r, R0](double s) {
          const double w = R0 + r * std::cos(s);
          return w * w;
        },
        [r, R0](double s) { return -2.0 * r * std::sin(s) * (R0 + r * std::cos(s)); },
        [r, R0](double s) {
          return -2.0 * r * std::cos(s) * (R0 + r * std::cos(s)) +
                 2.0 * r * r * std::sin(s) * std::sin(s);
        });
    return make(e, RadialProfile::constant(r * r), std::move(B), -1, {}, {}, {-3.0, 3.0}, params);
  }
  if (name == "ellipsoid" || name == "elliptic_hyperboloid") {
    const double c = p.get("c");
    if (!(c > 1.0)) p.reject("c > 1");
    const int del2 = name == "ellipsoid" ? -1 : 1;
    return make(e, ellipsoid_a_profile(c), sin2_profile(), del2, {0.0, kPi}, {0.0, kPi},
                {0.1, kPi - 0.1}, params);
  }
  if (name == "schwarzschild_2d") {
    const double M = p.get("M");
    if (!(M > 0.0)) p.reject("mass M > 0");
    auto f = [M](double r) { return 1.0 - 2.0 * M / r; };
    auto fp = [M](double r) { return 2.0 * M / (r * r); };
    auto fpp = [M](double r) { return -4.0 * M / (r * r * r); };
    auto A = profile([f](double r) { return 1.0 / f(r); },
                     [f, fp](double r) { return -fp(r) / (f(r) * f(r)); },
                     [f, fp, fpp](double r) {
                       const double fv = f(r);
                       return -fpp(r) / (fv * fv) + 2.0 * fp(r) * fp(r) / (fv * fv * fv);
                     },
                     positive);
    auto B = profile(f, fp, fpp, positive);
    return make(e, std::move(A), std::move(B), 1, {2.0 * M, kInf}, {2.0 * M},
                {2.5 * M, 10.0 * M}, params);
  }
  if (name == "cigar") {
    return make(e, RadialProfile::constant(0.5), tanh2_profile(0.5), 1, positive, {0.0},
                {0.1, 3.0}, params);
  }
  if (name == "tanh_warp") {
    const int del2 = p.sign("del2");
    return make(e, one(), tanh2_profile(1.0), del2, {}, {0.0}, {0.1, 3.0}, params);
  }
  // custom
  const int del2 = p.sign("del2");
  const double f0 = p.get("f0");
  const double f1 = p.get("f1");
  const double f2 = p.get("f2");
  const double lo = p.get("r_min");
  const double hi = p.get("r_max");
  if (!(lo < hi)) p.reject("r_min < r_max");
  auto f = [f0, f1, f2](double r) { return f0 + r * (f1 + r * f2); };
  auto fp = [f1, f2](double r) { return f1 + 2.0 * f2 * r; };
  // f must not vanish on [lo, hi]: check endpoints and the vertex of the quadratic.
  std::vector<double> probes{lo, hi};
  if (f2 != 0.0) {
    const double v = -f1 / (2.0 * f2);
    if (v > lo && v < hi) probes.push_back(v);
  }
  const double s0 = f(lo);
  for (double r : probes) {
    if (f(r) == 0.0 || (f(r) > 0.0) != (s0 > 0.0)) p.reject("f(R) != 0 on [r_min, r_max]");
  }
  auto B = profile([f](double r) { return f(r) * f(r); },
                   [f, fp](double r) { return 2.0 * f(r) * fp(r); },
                   [f, fp, f2](double r) { return 2.0 * fp(r) * fp(r) + 4.0 * f2 * f(r); });
  const double pad = 0.05 * (hi - lo);
  return make(e, one(), std::move(B), del2, {lo, hi}, {}, {lo + pad, hi - pad}, params);
}

double gauss_curvature(const TargetMetric& metric, double r) {
  metric.require_regular(r);
  const double E = metric.a(r);
  const double Ep = metric.a_prime(r);
  const double s = -static_cast<double>(metric.del2());
  const double G = s * metric.b(r);
  const double Gp = s * metric.b_prime(r);
  const double Gpp = s * metric.b_second(r);
  if (G == 0.0 || E == 0.0) {
    std::ostringstream os;
    os << "metric '" << metric.name() << "' degenerates at R = " << fmt_double(r);
    throw DomainError(os.str());
  }
  const double K = -Gpp / (2.0 * E * G) + Ep * Gp / (4.0 * E * E * G) + Gp * Gp / (4.0 * E * G * G);
  if (!std::isfinite(K)) {
    std::ostringstream os;
    os << "non-finite curvature for metric '" << metric.name() << "' at R = " << fmt_double(r);
    throw NumericalError(os.str());
  }
  return K;
}

CurvatureClass curvature_classify(const TargetMetric& metric, std::span<const double> samples) {
  if (samples.size() < 8) {
    throw ValidationError("curvature classification needs at least 8 sample points");
  }
  double kmin = kInf;
  double kmax = -kInf;
  double sum = 0.0;
  for (double r : samples) {
    const double K = gauss_curvature(metric, r);
    kmin = std::min(kmin, K);
    kmax = std::max(kmax, K);
    sum += K;
  }
  CurvatureClass out;
  out.mean = sum / static_cast<double>(samples.size());
  out.spread = kmax - kmin;
  out.constant = out.spread < 1e-9 * (1.0 + std::abs(out.mean));
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw ValidationError("linspace needs n >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

}  // namespace hmaps
