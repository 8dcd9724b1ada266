#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hmaps/reduction.hpp"

namespace hmaps {

enum class StepMethod { rk4_second_order, velocity_verlet };

const char* to_string(StepMethod m);
StepMethod parse_step_method(std::string_view name);

struct IntegratorConfig {
  double dt = 1e-3;
  StepMethod method = StepMethod::rk4_second_order;
  double invariant_tol = 1e-8;  // allowed |R'^2 - phi(R)| per unit t
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

// Samples of R(t), R'(t), H(t) on a fixed-step grid around a seed time.
//
// The grid is uniform on each side of the seed (the step is dt shrunk so that
// both span ends are hit exactly). H vanishes at the seed, which is ts[0]
// unless the caller asked for a seed inside the span.
struct ODESolution {
  std::vector<double> ts;
  std::vector<double> Rs;
  std::vector<double> Rps;
  std::vector<double> Hs;   // filled by quadrature_H
  std::vector<double> Hps;  // H'(t) = h_prime(R(t)), filled by quadrature_H
  std::vector<double> drift;
  std::vector<double> turning_events;
  std::vector<double> double_root_events;
  std::size_t seed_index = 0;

  std::size_t size() const { return ts.size(); }
  bool has_h() const { return Hs.size() == ts.size(); }
  double max_drift() const;
  double span() const { return ts.empty() ? 0.0 : ts.back() - ts.front(); }
};

// Integrates R'' = phi'(R)/2 from (r0, rp0) at t_seed across t_span.
ODESolution integrate_state(const TargetMetric& metric, const ReductionParams& params, double r0,
                            double rp0, Interval t_span, const IntegratorConfig& cfg,
                            std::optional<double> t_seed = std::nullopt);

// Same with R'(t_seed) = sign0 * sqrt(phi(r0)).
ODESolution integrate_R(const TargetMetric& metric, const ReductionParams& params, double r0,
                        int sign0, Interval t_span, const IntegratorConfig& cfg,
                        std::optional<double> t_seed = std::nullopt);

// Fills Hs/Hps: H(t) = integral of h_prime(R(tau)) from the seed, composite Simpson.
ODESolution quadrature_H(const TargetMetric& metric, const ReductionParams& params,
                         ODESolution sol);

struct ProfileSample {
  double R = 0.0;
  double Rp = 0.0;
  double H = 0.0;
  double Hp = 0.0;
};

// Cubic Hermite interpolation of (R, H) at t; requires quadrature_H.
ProfileSample interpolate(const ODESolution& sol, double t);

// Closed rectangular lattice [x_lo, x_hi] x [y_lo, y_hi] with nx x ny nodes.
struct Lattice {
  double x_lo = -1.0;
  double x_hi = 1.0;
  double y_lo = -1.0;
  double y_hi = 1.0;
  int nx = 8;
  int ny = 8;

  void validate() const;
  std::vector<double> xs() const;
  std::vector<double> ys() const;
};

struct MapPoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  double R = 0.0;
  double S = 0.0;
};

// Map values on a lattice, row-major with y as the outer index.
struct MapSample {
  double a = 0.0;
  double b = 1.0;
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<MapPoint> points;

  const MapPoint& at(std::size_t ix, std::size_t iy) const { return points[iy * xs.size() + ix]; }
};

MapSample assemble_map(const ODESolution& sol, const ReductionParams& params,
                       const Lattice& grid);

}  // namespace hmaps
