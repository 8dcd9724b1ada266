#include "hmaps/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hmaps/errors.hpp"

namespace hmaps {

void GridSpec::validate() const {
  if (nx < 8 || ny < 8) throw ValidationError("grid needs nx, ny >= 8");
  if (!(fd_h > 0.0) || !std::isfinite(fd_h)) throw ValidationError("fd_h must be > 0");
  if (fd_order != 2 && fd_order != 4) throw ValidationError("fd_order must be 2 or 4");
  if (!(x.hi > x.lo) || !(y.hi > y.lo) || !std::isfinite(x.width()) ||
      !std::isfinite(y.width())) {
    throw ValidationError("grid ranges must be finite with lo < hi");
  }
}

namespace {

// Zeros of B are fine here: E1, E2 stay polynomial in the profiles.
void require_in_domain(const TargetMetric& metric, double r) {
  if (!metric.in_domain(r) || !std::isfinite(r)) {
    std::ostringstream os;
    os << "R = " << r << " outside the domain of metric " << metric.name();
    throw DomainError(os.str());
  }
}

}  // namespace

ElTerms el_terms(const MapJet& j, const TargetMetric& metric, const SignaturePair& sig) {
  require_in_domain(metric, j.R);
  const double e = sig.eps2();
  const double A = metric.a(j.R);
  const double Ap = metric.a_prime(j.R);
  const double B = metric.b(j.R);
  const double Bp = metric.b_prime(j.R);
  ElTerms out;
  out.E1 = 2.0 * A * (j.Rxx - e * j.Ryy) + Ap * (j.Rx * j.Rx - e * j.Ry * j.Ry) +
           sig.del2() * Bp * (j.Sx * j.Sx - e * j.Sy * j.Sy);
  out.E2 = 2.0 * B * (j.Sxx - e * j.Syy) + 2.0 * Bp * (j.Rx * j.Sx - e * j.Ry * j.Sy);
  return out;
}

namespace {

struct Stencil1d {
  double f = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

template <typename F>
Stencil1d stencil(F&& f, double h, int order) {
  Stencil1d s;
  s.f = f(0.0);
  const double p1 = f(h);
  const double m1 = f(-h);
  if (order == 2) {
    s.d1 = (p1 - m1) / (2.0 * h);
    s.d2 = (p1 - 2.0 * s.f + m1) / (h * h);
  } else {
    const double p2 = f(2.0 * h);
    const double m2 = f(-2.0 * h);
    s.d1 = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h);
    s.d2 = (-p2 + 16.0 * p1 - 30.0 * s.f + 16.0 * m1 - m2) / (12.0 * h * h);
  }
  return s;
}

void check_finite(const MapValue& v, double x, double y) {
  if (!std::isfinite(v.R) || !std::isfinite(v.S)) {
    std::ostringstream os;
    os << "map not evaluable at (" << x << ", " << y << ")";
    throw DomainError(os.str());
  }
}

void track(double value, double& sup, GridLocation& where, double x, double y) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os << "non-finite residual at (" << x << ", " << y << ")";
    throw NumericalError(os.str());
  }
  if (std::abs(value) > sup) {
    sup = std::abs(value);
    where = {x, y};
  }
}

}  // namespace

MapJet fd_jet(const MapEvaluator& map, double x, double y, double h, int order) {
  if (order != 2 && order != 4) throw ValidationError("fd_order must be 2 or 4");
  auto along_x = [&](double d) {
    const MapValue v = map.eval(x + d, y);
    check_finite(v, x + d, y);
    return v;
  };
  auto along_y = [&](double d) {
    const MapValue v = map.eval(x, y + d);
    check_finite(v, x, y + d);
    return v;
  };
  // Each value is evaluated once per direction; R and S share the calls.
  std::vector<MapValue> xs;
  std::vector<MapValue> ys;
  const int reach = order / 2;
  for (int k = -reach; k <= reach; ++k) {
    xs.push_back(along_x(k * h));
    ys.push_back(along_y(k * h));
  }
  auto pick = [&](const std::vector<MapValue>& v, bool want_r) {
    return [&v, want_r, h, reach](double d) {
      const int k = int(std::lround(d / h)) + reach;
      return want_r ? v[std::size_t(k)].R : v[std::size_t(k)].S;
    };
  };
  const Stencil1d rx = stencil(pick(xs, true), h, order);
  const Stencil1d sx = stencil(pick(xs, false), h, order);
  const Stencil1d ry = stencil(pick(ys, true), h, order);
  const Stencil1d sy = stencil(pick(ys, false), h, order);
  MapJet j;
  j.R = rx.f;
  j.S = sx.f;
  j.Rx = rx.d1;
  j.Rxx = rx.d2;
  j.Sx = sx.d1;
  j.Sxx = sx.d2;
  j.Ry = ry.d1;
  j.Ryy = ry.d2;
  j.Sy = sy.d1;
  j.Syy = sy.d2;
  return j;
}

ResidualReport el_residual(const MapEvaluator& map, const TargetMetric& metric,
                           const SignaturePair& sig, const GridSpec& grid,
                           DerivativeSource source) {
  grid.validate();
  const bool analytic = source == DerivativeSource::analytic && map.has_analytic_derivatives();
  ResidualReport rep;
  for (double y : linspace(grid.y.lo, grid.y.hi, grid.ny)) {
    for (double x : linspace(grid.x.lo, grid.x.hi, grid.nx)) {
      const MapJet j = analytic ? map.derivs(x, y) : fd_jet(map, x, y, grid.fd_h, grid.fd_order);
      if (!metric.in_domain(j.R)) {
        std::ostringstream os;
        os << "map image R = " << j.R << " leaves the target domain at (" << x << ", " << y
           << ")";
        throw DomainError(os.str());
      }
      const ElTerms e = el_terms(j, metric, sig);
      track(e.E1, rep.sup_E1, rep.worst_E1, x, y);
      track(e.E2, rep.sup_E2, rep.worst_E2, x, y);
      ++rep.points;
    }
  }
  return rep;
}

ResidualReport el_residual(const MapSample& sample, const TargetMetric& metric,
                           const SignaturePair& sig) {
  const std::size_t nx = sample.xs.size();
  const std::size_t ny = sample.ys.size();
  if (nx < 3 || ny < 3 || sample.points.size() != nx * ny) {
    throw ValidationError("map sample needs a full lattice of at least 3 x 3 nodes");
  }
  ResidualReport rep;
  for (std::size_t iy = 1; iy + 1 < ny; ++iy) {
    const double hy_m = sample.ys[iy] - sample.ys[iy - 1];
    const double hy_p = sample.ys[iy + 1] - sample.ys[iy];
    for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
      const double hx_m = sample.xs[ix] - sample.xs[ix - 1];
      const double hx_p = sample.xs[ix + 1] - sample.xs[ix];
      const MapPoint& c = sample.at(ix, iy);
      const MapPoint& xm = sample.at(ix - 1, iy);
      const MapPoint& xp = sample.at(ix + 1, iy);
      const MapPoint& ym = sample.at(ix, iy - 1);
      const MapPoint& yp = sample.at(ix, iy + 1);
      // three-point formulas on a possibly non-uniform lattice
      auto d1 = [](double fm, double f0, double fp, double hm, double hp) {
        return (hm * hm * (fp - f0) + hp * hp * (f0 - fm)) / (hm * hp * (hm + hp));
      };
      auto d2 = [](double fm, double f0, double fp, double hm, double hp) {
        return 2.0 * (hm * (fp - f0) - hp * (f0 - fm)) / (hm * hp * (hm + hp));
      };
      MapJet j;
      j.R = c.R;
      j.S = c.S;
      j.Rx = d1(xm.R, c.R, xp.R, hx_m, hx_p);
      j.Rxx = d2(xm.R, c.R, xp.R, hx_m, hx_p);
      j.Sx = d1(xm.S, c.S, xp.S, hx_m, hx_p);
      j.Sxx = d2(xm.S, c.S, xp.S, hx_m, hx_p);
      j.Ry = d1(ym.R, c.R, yp.R, hy_m, hy_p);
      j.Ryy = d2(ym.R, c.R, yp.R, hy_m, hy_p);
      j.Sy = d1(ym.S, c.S, yp.S, hy_m, hy_p);
      j.Syy = d2(ym.S, c.S, yp.S, hy_m, hy_p);
      if (!metric.in_domain(j.R)) {
        std::ostringstream os;
        os << "map image R = " << j.R << " leaves the target domain at (" << c.x << ", " << c.y
           << ")";
        throw DomainError(os.str());
      }
      const ElTerms e = el_terms(j, metric, sig);
      track(e.E1, rep.sup_E1, rep.worst_E1, c.x, c.y);
      track(e.E2, rep.sup_E2, rep.worst_E2, c.x, c.y);
      ++rep.points;
    }
  }
  return rep;
}

ConvergenceReport el_convergence(const MapEvaluator& map, const TargetMetric& metric,
                                 const SignaturePair& sig, const GridSpec& grid) {
  ConvergenceReport out;
  out.coarse = el_residual(map, metric, sig, grid, DerivativeSource::finite_difference);
  GridSpec fine = grid;
  fine.fd_h = grid.fd_h / 2.0;
  out.fine = el_residual(map, metric, sig, fine, DerivativeSource::finite_difference);
  auto ratio = [](double c, double f) { return f > 0.0 ? c / f : 0.0; };
  out.ratio_E1 = ratio(out.coarse.sup_E1, out.fine.sup_E1);
  out.ratio_E2 = ratio(out.coarse.sup_E2, out.fine.sup_E2);
  const double c = std::max(out.coarse.sup_E1, out.coarse.sup_E2);
  const double f = std::max(out.fine.sup_E1, out.fine.sup_E2);
  if (c > 0.0 && f > 0.0) out.fine.observed_order = std::log2(c / f);
  return out;
}

ResidualReport first_integral_residual(const TargetMetric& metric, const ReductionParams& params,
                                       const ODESolution& sol) {
  if (!sol.has_h() || sol.Hps.size() != sol.size()) throw ValidationError("first-integral residual needs H' (run quadrature_H)");
  const double a = params.a();
  const double b = params.b();
  const double e = params.sig().eps2();
  const double d = params.sig().del2();
  const double kappa = params.kappa();
  const double lambda = params.lambda();
  ResidualReport rep;
  const std::size_t n = sol.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 100);
  for (std::size_t i = 0; i < n; ++i) {
    const double R = sol.Rs[i];
    require_in_domain(metric, R);
    const double A = metric.a(R);
    const double B = metric.b(R);
    const double Rp = sol.Rps[i];
    const double Hp = sol.Hps[i];
    const double K = A * Rp * Rp - d * B * Hp * Hp;
    const double G1 = (a * a + e * b * b) * K - 4.0 * e * kappa -
                      d * B * (b * b + e * a * a + 2.0 * (1.0 - e) * a * b * Hp);
    const double G2 = a * b * K + 2.0 * lambda - d * B * ((b * b - a * a) * Hp - a * b);
    if (!std::isfinite(G1) || !std::isfinite(G2)) {
      std::ostringstream os;
      os << "non-finite first-integral residual at t = " << sol.ts[i];
      throw NumericalError(os.str());
    }
    if (std::abs(G1) > rep.sup_G1) {
      rep.sup_G1 = std::abs(G1);
      rep.worst_G1_t = sol.ts[i];
    }
    if (std::abs(G2) > rep.sup_G2) {
      rep.sup_G2 = std::abs(G2);
      rep.worst_G2_t = sol.ts[i];
    }
    if (i % stride == 0 || i + 1 == n) rep.K_samples.push_back(K);
    ++rep.points;
  }
  return rep;
}

double energy_density(const MapEvaluator& map, const TargetMetric& metric,
                      const DomainMetric& domain, double x, double y) {
  const MapJet j = map.has_analytic_derivatives() ? map.derivs(x, y) : fd_jet(map, x, y, 1e-4, 4);
  require_in_domain(metric, j.R);
  const double e = domain.eps2();
  const double bracket = metric.a(j.R) * (j.Rx * j.Rx - e * j.Ry * j.Ry) -
                         metric.del2() * metric.b(j.R) * (j.Sx * j.Sx - e * j.Sy * j.Sy);
  return 0.25 * std::exp(-domain.conformal_factor(x, y)) * bracket;
}

}  // namespace hmaps
