#include "hmaps/wave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "hmaps/errors.hpp"
#include "hmaps/verifier.hpp"

namespace hmaps {

const char* to_string(WaveChart c) {
  switch (c) {
    case WaveChart::automatic: return "auto";
    case WaveChart::warped: return "warped";
    case WaveChart::pole: return "pole";
  }
  return "?";
}

WaveChart parse_wave_chart(std::string_view name) {
  if (name == "auto") return WaveChart::automatic;
  if (name == "warped") return WaveChart::warped;
  if (name == "pole") return WaveChart::pole;
  throw ValidationError("unknown chart '" + std::string(name) + "' (expected auto, warped, pole)");
}

void WaveEvolveConfig::validate() const {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw ValidationError("wave dx must be > 0");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("wave T must be > 0");
  if (!(cfl > 0.0)) throw ValidationError("wave cfl must be > 0");
  if (sweeps < 1) throw ValidationError("wave sweeps must be >= 1");
  if (cfl > 1.0) {
    std::ostringstream os;
    os << "CFL violation: dy/dx = " << cfl << " > 1";
    throw NumericalError(os.str());
  }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_smooth_pole(const TargetMetric& m, double r) {
  if (!std::isfinite(r)) return false;
  const double A = m.a(r);
  const double B = m.b(r);
  const double B2 = m.b_second(r);
  return std::isfinite(A) && A > 0.0 && std::abs(B) <= 1e-12 &&
         std::abs(B2 - 2.0 * A) <= 1e-8 * (1.0 + A);
}

// An interior pole only gives a chart if the profiles are even about it.
bool symmetric_about(const TargetMetric& m, double r) {
  for (double d : {0.05, 0.2, 0.5}) {
    if (!m.in_domain(r + d) || !m.in_domain(r - d)) continue;
    const double ap = m.a(r + d), am = m.a(r - d);
    const double bp = m.b(r + d), bm = m.b(r - d);
    if (std::abs(ap - am) > 1e-12 * (1.0 + std::abs(ap)) ||
        std::abs(bp - bm) > 1e-12 * (1.0 + std::abs(bp))) {
      return false;
    }
  }
  return true;
}

struct Fields {
  std::vector<double> p;
  std::vector<double> q;
};

// Conversion between (R, S) and the evolved pair, plus the source terms
// p_yy - p_xx, q_yy - q_xx.
class Chart {
 public:
  Chart(const TargetMetric& m, WaveChart kind, double pole, int side)
      : m_(m), kind_(kind), pole_(pole), side_(side) {}

  void to_chart(const MapJet& j, double& p, double& q, double& py, double& qy) const {
    if (kind_ == WaveChart::warped) {
      p = j.R;
      q = j.S;
      py = j.Ry;
      qy = j.Sy;
      return;
    }
    const double rho = side_ * (j.R - pole_);
    const double rhoy = side_ * j.Ry;
    const double c = std::cos(j.S), s = std::sin(j.S);
    p = rho * c;
    q = rho * s;
    py = rhoy * c - rho * s * j.Sy;
    qy = rhoy * s + rho * c * j.Sy;
  }

  void to_chart(const MapValue& v, double& p, double& q) const {
    MapJet j;
    j.R = v.R;
    j.S = v.S;
    double py, qy;
    to_chart(j, p, q, py, qy);
  }

  // Back to (R, S) in the representation used by the reference value.
  MapValue from_chart(double p, double q, const MapValue& ref) const {
    if (kind_ == WaveChart::warped) return {p, q};
    const double rho = std::hypot(p, q);
    double S = std::atan2(q, p);
    double R = pole_ + side_ * rho;
    if (side_ * (ref.R - pole_) < 0.0) {
      R = pole_ - side_ * rho;
      S += std::numbers::pi;
    }
    S += kTwoPi * std::round((ref.S - S) / kTwoPi);
    return {R, S};
  }

  void source(double p, double q, double px, double qx, double py, double qy, double& fp,
              double& fq) const {
    const double del2 = m_.del2();
    if (kind_ == WaveChart::warped) {
      check_r(p);
      const double A = m_.a(p), Ap = m_.a_prime(p);
      const double B = m_.b(p), Bp = m_.b_prime(p);
      if (!(B > 1e-14)) {
        std::ostringstream os;
        os << "B -> 0 during evolution (B = " << B << " at R = " << p << ")";
        throw NumericalError(os.str());
      }
      fp = Ap / (2.0 * A) * (px * px - py * py) + del2 * Bp / (2.0 * A) * (qx * qx - qy * qy);
      fq = Bp / B * (px * qx - py * qy);
      return;
    }
    const double rho = std::hypot(p, q);
    const double cs = rho > 0.0 ? p / rho : 1.0;
    const double sn = rho > 0.0 ? q / rho : 0.0;
    const double R = pole_ + side_ * rho;
    check_r(R);
    const double A = m_.a(R);
    const double dA = side_ * m_.a_prime(R);
    const double B = m_.b(R);
    const double dB = side_ * m_.b_prime(R);
    const double rx = cs * px + sn * qx;
    const double ry = cs * py + sn * qy;
    const double sx = cs * qx - sn * px;
    const double sy = cs * qy - sn * py;
    double alpha = 0.0;
    double beta = 0.0;
    if (rho > 1e-150 && B > 0.0) {
      alpha = (rho + del2 * dB / (2.0 * A)) / (rho * rho);
      beta = (2.0 - rho * dB / B) / rho;
    }
    const double P = dA / (2.0 * A) * (rx * rx - ry * ry) + alpha * (sx * sx - sy * sy);
    const double Q = beta * (rx * sx - ry * sy);
    fp = cs * P + sn * Q;
    fq = sn * P - cs * Q;
  }

 private:
  void check_r(double r) const {
    if (!m_.in_domain(r) || !std::isfinite(r)) {
      std::ostringstream os;
      os << "evolution left the target domain (R = " << r << ")";
      throw DomainError(os.str());
    }
  }

  const TargetMetric& m_;
  WaveChart kind_;
  double pole_;
  int side_;
};

[[noreturn]] void fail_at(std::size_t step, double x, const std::string& what) {
  std::ostringstream os;
  os << what << " at step " << step << ", x = " << x;
  throw NumericalError(os.str());
}

}  // namespace

std::vector<double> smooth_poles(const TargetMetric& metric) {
  std::vector<double> out;
  if (metric.del2() != -1) return out;
  std::vector<double> candidates = metric.singular_points();
  candidates.push_back(metric.r_domain().lo);
  candidates.push_back(metric.r_domain().hi);
  for (double r : candidates) {
    if (!is_smooth_pole(metric, r)) continue;
    if (metric.in_domain(r) && !symmetric_about(metric, r)) continue;
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  return out;
}

WaveResult wave_evolve(const TargetMetric& metric, const MapEvaluator& reference,
                       const WaveEvolveConfig& cfg, Interval x_range) {
  cfg.validate();
  if (!(x_range.hi > x_range.lo) || !std::isfinite(x_range.width())) {
    throw ValidationError("wave x-range must be finite with lo < hi");
  }
  const int nx = std::max(2, int(std::ceil(x_range.width() / cfg.dx - 1e-9)));
  const int ny = std::max(1, int(std::ceil(cfg.T / (cfg.cfl * cfg.dx) - 1e-9)));

  WaveResult res;
  res.dx = x_range.width() / nx;
  res.dy = cfg.T / ny;
  res.steps = std::size_t(ny);
  res.xs = linspace(x_range.lo, x_range.hi, nx + 1);
  const double dx = res.dx;
  const double dy = res.dy;
  const std::size_t n = res.xs.size();

  auto jet_at = [&](double x, double y) {
    return reference.has_analytic_derivatives() ? reference.derivs(x, y)
                                                : fd_jet(reference, x, y, 1e-4, 4);
  };
  std::vector<MapJet> init(n);
  for (std::size_t i = 0; i < n; ++i) init[i] = jet_at(res.xs[i], 0.0);

  // chart choice
  WaveChart kind = cfg.chart;
  double pole = 0.0;
  int side = 1;
  const std::vector<double> poles = smooth_poles(metric);
  double best = kInf;
  for (double r : poles) {
    for (const MapJet& j : init) {
      if (std::abs(j.R - r) < best) {
        best = std::abs(j.R - r);
        pole = r;
      }
    }
  }
  if (kind == WaveChart::automatic) kind = best < 0.5 ? WaveChart::pole : WaveChart::warped;
  if (kind == WaveChart::pole) {
    if (poles.empty()) {
      throw ValidationError("pole chart needs del2 = -1 and a smooth pole (B = 0, B'' = 2A)");
    }
    if (pole == metric.r_domain().hi) side = -1;
    res.pole = pole;
  }
  res.chart = kind;
  const Chart chart(metric, kind, pole, side);

  Fields prev, cur, next;
  for (Fields* f : {&prev, &cur, &next}) {
    f->p.assign(n, 0.0);
    f->q.assign(n, 0.0);
  }
  std::vector<double> py0(n), qy0(n);
  for (std::size_t i = 0; i < n; ++i) chart.to_chart(init[i], cur.p[i], cur.q[i], py0[i], qy0[i]);

  auto set_boundary = [&](Fields& f, double y) {
    for (std::size_t i : {std::size_t(0), n - 1}) chart.to_chart(reference.eval(res.xs[i], y), f.p[i], f.q[i]);
  };
  auto rhs = [&](const Fields& f, std::size_t i, double py, double qy, double& fp, double& fq) {
    const double px = (f.p[i + 1] - f.p[i - 1]) / (2.0 * dx);
    const double qx = (f.q[i + 1] - f.q[i - 1]) / (2.0 * dx);
    const double pxx = (f.p[i + 1] - 2.0 * f.p[i] + f.p[i - 1]) / (dx * dx);
    const double qxx = (f.q[i + 1] - 2.0 * f.q[i] + f.q[i - 1]) / (dx * dx);
    chart.source(f.p[i], f.q[i], px, qx, py, qy, fp, fq);
    fp += pxx;
    fq += qxx;
  };
  auto check_step = [&](const Fields& f, std::size_t step) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(f.p[i]) || !std::isfinite(f.q[i])) fail_at(step, res.xs[i], "NaN in wave evolution");
    }
  };
  auto guarded = [&](std::size_t step, std::size_t i, auto&& body) {
    try {
      body();
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception& e) {
      fail_at(step, res.xs[i], e.what());
    }
  };

  // first step: Taylor with u_yy from the equation
  for (std::size_t i = 1; i + 1 < n; ++i) {
    guarded(1, i, [&] {
      double fp, fq;
      rhs(cur, i, py0[i], qy0[i], fp, fq);
      next.p[i] = cur.p[i] + dy * py0[i] + 0.5 * dy * dy * fp;
      next.q[i] = cur.q[i] + dy * qy0[i] + 0.5 * dy * dy * fq;
    });
  }
  set_boundary(next, dy);
  check_step(next, 1);
  std::swap(prev, cur);
  std::swap(cur, next);

  for (int step = 2; step <= ny; ++step) {
    const double y_next = step == ny ? cfg.T : step * dy;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      next.p[i] = 2.0 * cur.p[i] - prev.p[i];
      next.q[i] = 2.0 * cur.q[i] - prev.q[i];
    }
    // the centred y-derivative needs the new level; iterate to a fixed point
    for (int s = 0; s < cfg.sweeps; ++s) {
      for (std::size_t i = 1; i + 1 < n; ++i) {
        guarded(std::size_t(step), i, [&] {
          const double py = (next.p[i] - prev.p[i]) / (2.0 * dy);
          const double qy = (next.q[i] - prev.q[i]) / (2.0 * dy);
          double fp, fq;
          rhs(cur, i, py, qy, fp, fq);
          next.p[i] = 2.0 * cur.p[i] - prev.p[i] + dy * dy * fp;
          next.q[i] = 2.0 * cur.q[i] - prev.q[i] + dy * dy * fq;
        });
      }
    }
    set_boundary(next, y_next);
    check_step(next, std::size_t(step));
    std::swap(prev, cur);
    std::swap(cur, next);
  }

  res.R.resize(n);
  res.S.resize(n);
  res.R_ref.resize(n);
  res.S_ref.resize(n);
  double sum_c = 0.0, sum_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const MapValue ref = reference.eval(res.xs[i], cfg.T);
    const MapValue got = chart.from_chart(cur.p[i], cur.q[i], ref);
    res.R[i] = got.R;
    res.S[i] = got.S;
    res.R_ref[i] = ref.R;
    res.S_ref[i] = ref.S;
    const double dR = got.R - ref.R;
    const double dS = got.S - ref.S;
    sum_c += dR * dR + dS * dS;
    sum_m += metric.a(ref.R) * dR * dR + std::abs(metric.b(ref.R)) * dS * dS;
    res.max_dR = std::max(res.max_dR, std::abs(dR));
  }
  res.deviation_coord = std::sqrt(dx * sum_c);
  res.deviation_metric = std::sqrt(dx * sum_m);
  return res;
}

}  // namespace hmaps
