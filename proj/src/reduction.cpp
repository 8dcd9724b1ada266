#include "hmaps/reduction.hpp"

#include <cmath>
#include <sstream>

#include "hmaps/errors.hpp"

namespace hmaps {

void check_frame(double a, double b, int eps2) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw ValidationError("frame direction (a, b) must be finite");
  }
  const double s = a * a + b * b;
  if (s == 0.0) throw ValidationError("frame direction (a, b) must not be (0, 0)");
  const double gap = b * b - eps2 * a * a;
  if (std::abs(gap) <= 1e-14 * s) {
    std::ostringstream os;
    os << "degenerate frame: b^2 = eps2 a^2 (a = " << a << ", b = " << b << ", eps2 = " << eps2
       << "); this forces B(R) constant, R constant and a vanishing Jacobian";
    throw ValidationError(os.str());
  }
}

ReductionParams::ReductionParams(double a, double b, double kappa, double lambda,
                                 SignaturePair sig)
    : a_(a), b_(b), kappa_(kappa), lambda_(lambda), sig_(sig) {
  check_frame(a, b, sig.eps2());
  if (!std::isfinite(kappa) || !std::isfinite(lambda)) {
    throw ValidationError("kappa and lambda must be finite");
  }
}

double ReductionParams::frame_gap() const { return b_ * b_ - sig_.eps2() * a_ * a_; }

ReducedCoefficients coefficients(const ReductionParams& p) {
  const double a = p.a();
  const double b = p.b();
  const double e2 = p.sig().eps2();
  const double d2 = p.sig().del2();
  const double s = a * a + b * b;
  const double s2 = s * s;
  const double plus = b * b + e2 * a * a;
  const double gap = p.frame_gap();
  const double inner = 2.0 * p.kappa() * a * b + p.lambda() * plus;

  ReducedCoefficients c;
  c.c1 = d2 * e2 * s2 * s2;
  c.c2 = 4.0 * s2 * plus;
  c.c3 = 8.0 * e2 * a * b * s2;
  c.c4 = 4.0 * d2 * inner * inner;
  c.denom_const = s2 * gap * gap;
  return c;
}

Reduction::Reduction(const TargetMetric& metric, const ReductionParams& params)
    : metric_(&metric), params_(params), coeffs_(coefficients(params)) {
  const double a = params.a();
  const double b = params.b();
  const double e2 = params.sig().eps2();
  const double d2 = params.sig().del2();
  const double s = a * a + b * b;
  linear_coeff_ = coeffs_.c2 * params.kappa() + coeffs_.c3 * params.lambda();
  hp_const_ = 2.0 * params.lambda() * d2 * (b * b + e2 * a * a) + 4.0 * params.kappa() * d2 * a * b;
  hp_b_coeff_ = a * b * s * (e2 + 1.0);
  hp_denom_ = params.frame_gap() * s;
}

double Reduction::checked_b(double r) const {
  metric_->require_regular(r);
  const double B = metric_->b(r);
  if (!(B > 0.0)) {
    std::ostringstream os;
    os << "B(R) = " << B << " is not positive at R = " << r << " for metric '"
       << metric_->name() << "'";
    throw DomainError(os.str());
  }
  return B;
}

double Reduction::phi(double r) const {
  const double B = checked_b(r);
  const double A = metric_->a(r);
  const double num = (coeffs_.c1 * B + linear_coeff_) * B + coeffs_.c4;
  return num / (coeffs_.denom_const * A * B);
}

double Reduction::phi_prime(double r) const {
  const double B = checked_b(r);
  const double A = metric_->a(r);
  const double Ap = metric_->a_prime(r);
  const double Bp = metric_->b_prime(r);
  const double num = (coeffs_.c1 * B + linear_coeff_) * B + coeffs_.c4;
  const double dnum = (2.0 * coeffs_.c1 * B + linear_coeff_) * Bp;
  const double den = A * B;
  const double dden = Ap * B + A * Bp;
  return (dnum * den - num * dden) / (coeffs_.denom_const * den * den);
}

double Reduction::h_prime(double r) const {
  const double B = checked_b(r);
  return (hp_const_ + hp_b_coeff_ * B) / (hp_denom_ * B);
}

double phi(const TargetMetric& metric, const ReductionParams& params, double r) {
  return Reduction(metric, params).phi(r);
}

double phi_prime(const TargetMetric& metric, const ReductionParams& params, double r) {
  return Reduction(metric, params).phi_prime(r);
}

double h_prime(const TargetMetric& metric, const ReductionParams& params, double r) {
  return Reduction(metric, params).h_prime(r);
}

const char* to_string(EndpointKind kind) {
  switch (kind) {
    case EndpointKind::simple_root: return "simple_root";
    case EndpointKind::double_root: return "double_root";
    case EndpointKind::domain_edge: return "domain_edge";
  }
  return "?";
}

namespace {

// Root of phi in [lo, hi] where phi(lo) and phi(hi) straddle zero
// (nonnegative on exactly one side).
double bisect_root(const Reduction& red, double lo, double hi) {
  const bool lo_nonneg = red.phi(lo) >= 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((red.phi(mid) >= 0.0) == lo_nonneg) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

EndpointKind classify_root(const Reduction& red, double r) {
  const double h = 1e-5;
  const double dp = red.phi_prime(r);
  double second = 0.0;
  if (red.metric().in_domain(r - h) && red.metric().in_domain(r + h) &&
      !red.metric().near_singular(r - h, 1e-9) && !red.metric().near_singular(r + h, 1e-9)) {
    second = (red.phi_prime(r + h) - red.phi_prime(r - h)) / (2.0 * h);
  }
  return std::abs(dp) <= 1e-10 * (1.0 + std::abs(second)) ? EndpointKind::double_root
                                                           : EndpointKind::simple_root;
}

}  // namespace

std::vector<AdmissibleInterval> admissible_intervals(const TargetMetric& metric,
                                                     const ReductionParams& params,
                                                     Interval scan, int n) {
  if (n < 16) throw ValidationError("admissible_intervals needs n >= 16");
  if (!(scan.lo < scan.hi) || !metric.in_domain(scan.lo) || !metric.in_domain(scan.hi)) {
    std::ostringstream os;
    os << "scan interval [" << scan.lo << ", " << scan.hi << "] is not inside the domain of '"
       << metric.name() << "'";
    throw ValidationError(os.str());
  }
  const Reduction red(metric, params);
  const std::vector<double> rs = linspace(scan.lo, scan.hi, n + 1);
  std::vector<bool> nonneg(rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double v = red.phi(rs[i]);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "phi is not finite at R = " << rs[i];
      throw NumericalError(os.str());
    }
    nonneg[i] = v >= 0.0;
  }

  std::vector<AdmissibleInterval> out;
  std::size_t i = 0;
  while (i < rs.size()) {
    if (!nonneg[i]) {
      ++i;
      continue;
    }
    AdmissibleInterval iv;
    if (i == 0) {
      iv.range.lo = scan.lo;
      iv.lo_kind = EndpointKind::domain_edge;
    } else {
      iv.range.lo = bisect_root(red, rs[i - 1], rs[i]);
      iv.lo_kind = classify_root(red, iv.range.lo);
    }
    std::size_t j = i;
    while (j + 1 < rs.size() && nonneg[j + 1]) ++j;
    if (j + 1 == rs.size()) {
      iv.range.hi = scan.hi;
      iv.hi_kind = EndpointKind::domain_edge;
    } else {
      iv.range.hi = bisect_root(red, rs[j], rs[j + 1]);
      iv.hi_kind = classify_root(red, iv.range.hi);
    }
    out.push_back(iv);
    i = j + 1;
  }
  return out;
}

FirstIntegrals recover_first_integrals(const TargetMetric& metric, const SignaturePair& sig,
                                       double a, double b, double r0, double rp0, double hp0) {
  check_frame(a, b, sig.eps2());
  metric.require_regular(r0);
  const double B = metric.b(r0);
  if (!(B > 0.0)) {
    std::ostringstream os;
    os << "B(R0) = " << B << " is not positive at R0 = " << r0;
    throw DomainError(os.str());
  }
  const double A = metric.a(r0);
  const double e2 = sig.eps2();
  const double d2 = sig.del2();
  const double K = A * rp0 * rp0 - d2 * B * hp0 * hp0;

  FirstIntegrals out;
  out.kappa = ((a * a + e2 * b * b) * K -
               d2 * B * (b * b + e2 * a * a + 2.0 * (1.0 - e2) * a * b * hp0)) /
              (4.0 * e2);
  out.lambda = (d2 * B * ((b * b - a * a) * hp0 - a * b) - a * b * K) / 2.0;
  return out;
}

}  // namespace hmaps
