#pragma once

#include <vector>

#include "hmaps/target_metrics.hpp"

namespace hmaps {

// Constants of the traveling-frame reduction: frame direction (a, b) and the
// first-integral constants kappa, lambda.
class ReductionParams {
 public:
  // Throws ValidationError when b^2 == eps2 a^2 (degenerate frame) or a = b = 0.
  ReductionParams(double a, double b, double kappa, double lambda, SignaturePair sig);

  double a() const { return a_; }
  double b() const { return b_; }
  double kappa() const { return kappa_; }
  double lambda() const { return lambda_; }
  const SignaturePair& sig() const { return sig_; }

  // b^2 - eps2 a^2, nonzero by construction.
  double frame_gap() const;

  ReductionParams with_constants(double kappa, double lambda) const {
    return ReductionParams(a_, b_, kappa, lambda, sig_);
  }

 private:
  double a_;
  double b_;
  double kappa_;
  double lambda_;
  SignaturePair sig_;
};

// Throws ValidationError if (a, b) is a degenerate frame for eps2.
void check_frame(double a, double b, int eps2);

struct ReducedCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
  double denom_const = 0.0;  // (a^2+b^2)^2 (b^2 - eps2 a^2)^2
};

ReducedCoefficients coefficients(const ReductionParams& params);

struct TravelingFrame {
  double a = 0.0;
  double b = 1.0;

  double t(double x, double y) const { return a * y - b * x; }
};

// Metric and constants bound together with precomputed coefficients; this is
// what the integrator calls on every step.
class Reduction {
 public:
  Reduction(const TargetMetric& metric, const ReductionParams& params);

  const TargetMetric& metric() const { return *metric_; }
  const ReductionParams& params() const { return params_; }
  const ReducedCoefficients& coeffs() const { return coeffs_; }

  // Required value of R'(t)^2.
  double phi(double r) const;
  double phi_prime(double r) const;
  double h_prime(double r) const;

 private:
  double checked_b(double r) const;

  const TargetMetric* metric_;
  ReductionParams params_;
  ReducedCoefficients coeffs_;
  double linear_coeff_;  // c2 kappa + c3 lambda
  double hp_const_;      // numerator of H' without the B term
  double hp_b_coeff_;    // coefficient of B(R) in the numerator of H'
  double hp_denom_;      // (b^2 - eps2 a^2)(a^2 + b^2)
};

double phi(const TargetMetric& metric, const ReductionParams& params, double r);
double phi_prime(const TargetMetric& metric, const ReductionParams& params, double r);
double h_prime(const TargetMetric& metric, const ReductionParams& params, double r);

enum class EndpointKind { simple_root, double_root, domain_edge };

const char* to_string(EndpointKind kind);

struct AdmissibleInterval {
  Interval range;
  EndpointKind lo_kind = EndpointKind::domain_edge;
  EndpointKind hi_kind = EndpointKind::domain_edge;
};

// Maximal closed subintervals of scan on which phi >= 0.
std::vector<AdmissibleInterval> admissible_intervals(const TargetMetric& metric,
                                                     const ReductionParams& params,
                                                     Interval scan, int n);

struct FirstIntegrals {
  double kappa = 0.0;
  double lambda = 0.0;
};

// Solves the two first-integral relations for (kappa, lambda) given the
// state (R, R', H') at one point of a traveling-wave map.
FirstIntegrals recover_first_integrals(const TargetMetric& metric, const SignaturePair& sig,
                                       double a, double b, double r0, double rp0, double hp0);

}  // namespace hmaps
