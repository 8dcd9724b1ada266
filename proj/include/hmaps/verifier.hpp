#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hmaps/integrator.hpp"
#include "hmaps/map_evaluator.hpp"

namespace hmaps {

// Closed ranges [x.lo, x.hi] x [y.lo, y.hi] sampled with nx x ny nodes.
struct GridSpec {
  Interval x{-1.0, 1.0};
  Interval y{-1.0, 1.0};
  int nx = 50;
  int ny = 50;
  double fd_h = 1e-3;
  int fd_order = 2;

  void validate() const;
};

enum class DerivativeSource { analytic, finite_difference };

struct GridLocation {
  double x = 0.0;
  double y = 0.0;
};

struct ResidualReport {
  double sup_E1 = 0.0;
  double sup_E2 = 0.0;
  double sup_G1 = 0.0;
  double sup_G2 = 0.0;
  GridLocation worst_E1;
  GridLocation worst_E2;
  double worst_G1_t = 0.0;
  double worst_G2_t = 0.0;
  std::optional<double> observed_order;
  std::vector<double> K_samples;
  std::size_t points = 0;
};

struct ElTerms {
  double E1 = 0.0;
  double E2 = 0.0;
};

// Real-coordinate Euler-Lagrange expressions at one point:
//   E1 = 2A(R_xx - eps2 R_yy) + A'(R_x^2 - eps2 R_y^2) + del2 B'(S_x^2 - eps2 S_y^2)
//   E2 = 2B(S_xx - eps2 S_yy) + 2B'(R_x S_x - eps2 R_y S_y)
ElTerms el_terms(const MapJet& j, const TargetMetric& metric, const SignaturePair& sig);

// Finite-difference jet of a map at (x, y) with step h, order 2 or 4.
MapJet fd_jet(const MapEvaluator& map, double x, double y, double h, int order);

// Sup of |E1|, |E2| over the grid. Analytic derivatives are used when the map
// has them and source == analytic; otherwise stencils of grid.fd_order at grid.fd_h.
ResidualReport el_residual(const MapEvaluator& map, const TargetMetric& metric,
                           const SignaturePair& sig, const GridSpec& grid,
                           DerivativeSource source = DerivativeSource::analytic);

// Lattice data: second-order differences on the interior nodes.
ResidualReport el_residual(const MapSample& sample, const TargetMetric& metric,
                           const SignaturePair& sig);

// Finite-difference residuals at fd_h and fd_h / 2; returns the finer report
// with observed_order = log2(sup(h) / sup(h/2)) taken over max(E1, E2).
struct ConvergenceReport {
  ResidualReport coarse;
  ResidualReport fine;
  double ratio_E1 = 0.0;
  double ratio_E2 = 0.0;
};

ConvergenceReport el_convergence(const MapEvaluator& map, const TargetMetric& metric,
                                 const SignaturePair& sig, const GridSpec& grid);

// First-integral residuals G1, G2 along a reduced solution (needs quadrature_H).
ResidualReport first_integral_residual(const TargetMetric& metric, const ReductionParams& params,
                                       const ODESolution& sol);

// e(u) = 1/4 exp(-f) [A (R_x^2 - eps2 R_y^2) - del2 B (S_x^2 - eps2 S_y^2)].
double energy_density(const MapEvaluator& map, const TargetMetric& metric,
                      const DomainMetric& domain, double x, double y);

}  // namespace hmaps
