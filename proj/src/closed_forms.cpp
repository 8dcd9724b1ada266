#include "hmaps/closed_forms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "hmaps/errors.hpp"

namespace hmaps {

MapJet MapEvaluator::derivs(double, double) const {
  throw ValidationError("this map has no analytic derivatives");
}

const char* to_string(Family f) {
  switch (f) {
    case Family::ellipsoid: return "ellipsoid";
    case Family::hyperboloid: return "hyperboloid";
    case Family::mixed: return "mixed";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  if (name == "ellipsoid") return Family::ellipsoid;
  if (name == "hyperboloid") return Family::hyperboloid;
  if (name == "mixed") return Family::mixed;
  throw ValidationError("unknown closed-form family '" + std::string(name) +
                        "' (expected ellipsoid, hyperboloid or mixed)");
}

namespace {

constexpr double kPi = std::numbers::pi;

// atan2(q sin u, cos u) continued so that it stays within pi/2 of u; this is
// the smooth extension of arctan(q tan u) across the poles of tan.
double unwrapped_arctan_tan(double q, double u) {
  const double principal = std::atan2(q * std::sin(u), std::cos(u));
  return principal + 2.0 * kPi * std::round((u - principal) / (2.0 * kPi));
}

}  // namespace

ClosedFormMap::ClosedFormMap(Family family, double c, double theta, double a, double b,
                             SignaturePair sig)
    : family_(family), c_(c), theta_(theta), a_(a), b_(b), sig_(sig), rate_(1.0), linear_(0.0) {
  switch (family) {
    case Family::ellipsoid:
      rate_ = 1.0 / std::sqrt(c * c - 1.0);
      break;
    case Family::hyperboloid:
      rate_ = (a * a + b * b) / ((b * b - a * a) * std::sqrt(c * c - 1.0));
      linear_ = 2.0 * a * b / (b * b - a * a);
      break;
    case Family::mixed: {
      const double D = b * b - sig.eps2() * a * a;
      linear_ = (1.0 + sig.eps2()) * a * b / D;
      break;
    }
  }
}

ClosedFormMap ellipsoid_map(double c, double theta, double a, double b) {
  if (!(c > 1.0)) throw ValidationError("ellipsoid family requires c > 1");
  if (!(theta > 0.0 && theta < kPi / 2.0)) {
    throw ValidationError("ellipsoid family requires theta in (0, pi/2)");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || (a == 0.0 && b == 0.0)) {
    throw ValidationError("ellipsoid family requires finite (a, b) != (0, 0)");
  }
  return ClosedFormMap(Family::ellipsoid, c, theta, a, b, SignaturePair(-1, -1));
}

ClosedFormMap hyperboloid_map(double c, double theta, double a, double b) {
  if (!(c > 1.0)) throw ValidationError("hyperboloid family requires c > 1");
  if (!std::isfinite(theta)) throw ValidationError("hyperboloid family requires finite theta");
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("hyperboloid family requires finite (a, b)");
  }
  check_frame(a, b, 1);
  return ClosedFormMap(Family::hyperboloid, c, theta, a, b, SignaturePair(1, 1));
}

ClosedFormMap mixed_map(double theta, int eps2) {
  if (!(theta > 0.0 && theta < kPi / 4.0)) {
    throw ValidationError("mixed family requires theta in (0, pi/4)");
  }
  const SignaturePair sig(eps2, -eps2);
  return ClosedFormMap(Family::mixed, 0.0, theta, std::sin(theta), std::cos(theta), sig);
}

TargetMetric ClosedFormMap::target() const {
  switch (family_) {
    case Family::ellipsoid: return catalog_lookup("ellipsoid", {{"c", c_}});
    case Family::hyperboloid: return catalog_lookup("elliptic_hyperboloid", {{"c", c_}});
    case Family::mixed: return catalog_lookup("tanh_warp", {{"del2", double(sig_.del2())}});
  }
  throw ValidationError("unknown family");
}

ProfileJet ClosedFormMap::profile(double t) const {
  ProfileJet p;
  if (family_ == Family::mixed) {
    const double D = b_ * b_ - sig_.eps2() * a_ * a_;
    const double q = D * D + t * t;
    p.R = std::asinh(t / D);
    p.Rt = 1.0 / std::sqrt(q);
    p.Rtt = -t / (q * std::sqrt(q));
    p.H = linear_ * t;
    p.Ht = linear_;
    p.Htt = 0.0;
    return p;
  }

  const double u = rate_ * t;
  const double su = std::sin(u);
  const double cu = std::cos(u);
  // ellipsoid: amp = cos(theta), skew = sin(theta); hyperboloid: cosh, sinh.
  const bool ell = family_ == Family::ellipsoid;
  const double amp = ell ? std::cos(theta_) : std::cosh(theta_);
  const double skew = ell ? std::sin(theta_) : std::sinh(theta_);
  const double g = 1.0 - amp * amp * su * su;
  if (!(g > 0.0)) {
    std::ostringstream os;
    os.precision(12);
    os << to_string(family_) << " family undefined at t = " << t
       << ": |cosh(theta) sin(omega t)| >= 1 (arccos/arctanh domain)";
    throw DomainError(os.str());
  }
  const double sg = std::sqrt(g);
  const double Ru = -amp * cu / sg;
  const double Ruu = amp * (1.0 - amp * amp) * su / (g * sg);
  p.R = std::acos(amp * su);
  p.Rt = rate_ * Ru;
  p.Rtt = rate_ * rate_ * Ruu;
  const double Hu = skew / g;
  const double Huu = 2.0 * skew * amp * amp * su * cu / (g * g);
  if (ell) {
    p.H = unwrapped_arctan_tan(skew, u);
  } else {
    p.H = linear_ * t + std::atanh(skew * su / cu);
  }
  p.Ht = linear_ + rate_ * Hu;
  p.Htt = rate_ * rate_ * Huu;
  return p;
}

MapValue ClosedFormMap::eval(double x, double y) const {
  const ProfileJet p = profile(a_ * y - b_ * x);
  return {p.R, a_ * x + b_ * y + p.H};
}

MapJet ClosedFormMap::derivs(double x, double y) const {
  const ProfileJet p = profile(a_ * y - b_ * x);
  MapJet j;
  j.R = p.R;
  j.S = a_ * x + b_ * y + p.H;
  j.Rx = -b_ * p.Rt;
  j.Ry = a_ * p.Rt;
  j.Rxx = b_ * b_ * p.Rtt;
  j.Ryy = a_ * a_ * p.Rtt;
  j.Sx = a_ - b_ * p.Ht;
  j.Sy = b_ + a_ * p.Ht;
  j.Sxx = b_ * b_ * p.Htt;
  j.Syy = a_ * a_ * p.Htt;
  return j;
}

FirstIntegrals ClosedFormMap::first_integrals_at(double t) const {
  const ProfileJet p = profile(t);
  return recover_first_integrals(target(), sig_, a_, b_, p.R, p.Rt, p.Ht);
}

MapSample sample_map(const ClosedFormMap& map, const Lattice& grid) {
  grid.validate();
  MapSample s;
  s.a = map.a();
  s.b = map.b();
  s.xs = grid.xs();
  s.ys = grid.ys();
  s.points.reserve(s.xs.size() * s.ys.size());
  for (double y : s.ys) {
    for (double x : s.xs) {
      const MapValue v = map.eval(x, y);
      s.points.push_back({x, y, map.a() * y - map.b() * x, v.R, v.S});
    }
  }
  return s;
}

Quadric parse_quadric(std::string_view name) {
  if (name == "ellipsoid") return Quadric::ellipsoid;
  if (name == "hyperboloid") return Quadric::hyperboloid;
  throw ValidationError("embedding is only defined for the ellipsoid and hyperboloid families");
}

namespace {

void check_embed_args(Quadric quadric, double c, double R) {
  if (!(c > 1.0)) throw ValidationError("embedding requires c > 1");
  if (quadric == Quadric::ellipsoid) {
    if (!(R > 0.0 && R < kPi)) {
      std::ostringstream os;
      os << "ellipsoid embedding needs R in (0, pi), got R = " << R;
      throw DomainError(os.str());
    }
  } else if (std::sin(R) == 0.0 || !std::isfinite(R)) {
    std::ostringstream os;
    os << "hyperboloid embedding needs sin R != 0, got R = " << R;
    throw DomainError(os.str());
  }
}

}  // namespace

EmbeddingR3 embed(Quadric quadric, double c, double R, double S) {
  check_embed_args(quadric, c, R);
  EmbeddingR3 e;
  if (quadric == Quadric::ellipsoid) {
    e.ambient = AmbientSignature::euclidean;
    e.point = {c * std::cos(R), std::sin(R) * std::cos(S), std::sin(R) * std::sin(S)};
  } else {
    e.ambient = AmbientSignature::minkowski;
    e.point = {c * std::cos(R), std::sin(R) * std::cosh(S), std::sin(R) * std::sinh(S)};
  }
  return e;
}

double quadric_residual(Quadric quadric, double c, const EmbeddingR3& e) {
  const auto& [X, Y, Z] = e.point;
  const double zz = quadric == Quadric::ellipsoid ? Z * Z : -Z * Z;
  return X * X / (c * c) + Y * Y + zz - 1.0;
}

InducedMetric induced_metric_check(Quadric quadric, double c, double R, double S) {
  check_embed_args(quadric, c, R);
  const double sR = std::sin(R);
  const double cR = std::cos(R);
  std::array<double, 3> dR{};
  std::array<double, 3> dS{};
  std::array<double, 3> eta{1.0, 1.0, 1.0};
  if (quadric == Quadric::ellipsoid) {
    dR = {-c * sR, cR * std::cos(S), cR * std::sin(S)};
    dS = {0.0, -sR * std::sin(S), sR * std::cos(S)};
  } else {
    dR = {-c * sR, cR * std::cosh(S), cR * std::sinh(S)};
    dS = {0.0, sR * std::sinh(S), sR * std::cosh(S)};
    eta[2] = -1.0;
  }
  auto dot = [&](const std::array<double, 3>& u, const std::array<double, 3>& v) {
    return eta[0] * u[0] * v[0] + eta[1] * u[1] * v[1] + eta[2] * u[2] * v[2];
  };
  InducedMetric out;
  out.pullback = {{{dot(dR, dR), dot(dR, dS)}, {dot(dS, dR), dot(dS, dS)}}};
  const double del2 = quadric == Quadric::ellipsoid ? -1.0 : 1.0;
  const double A = c * c * sR * sR + cR * cR;
  const double B = sR * sR;
  out.expected = {{{A, 0.0}, {0.0, -del2 * B}}};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.residual = std::max(out.residual, std::abs(out.pullback[i][j] - out.expected[i][j]));
    }
  }
  return out;
}

}  // namespace hmaps
