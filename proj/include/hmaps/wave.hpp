#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "hmaps/map_evaluator.hpp"
#include "hmaps/target_metrics.hpp"

namespace hmaps {

// warped: evolve (R, S) directly. pole: evolve z = rho (cos S, sin S) with
// rho the distance to a smooth pole of the target (B(R*) = 0, B'' = 2A),
// which stays regular where the map passes through B = 0.
enum class WaveChart { automatic, warped, pole };

const char* to_string(WaveChart c);
WaveChart parse_wave_chart(std::string_view name);

struct WaveEvolveConfig {
  double dx = 1e-2;
  double cfl = 0.5;  // dy / dx
  double T = 1.0;
  WaveChart chart = WaveChart::automatic;
  int sweeps = 3;  // fixed-point passes for the centred y-derivatives

  void validate() const;
};

struct WaveResult {
  std::vector<double> xs;
  std::vector<double> R;
  std::vector<double> S;
  std::vector<double> R_ref;
  std::vector<double> S_ref;
  double dx = 0.0;
  double dy = 0.0;
  std::size_t steps = 0;
  WaveChart chart = WaveChart::warped;
  std::optional<double> pole;
  // sqrt(dx sum (dR^2 + dS^2)) and sqrt(dx sum (A dR^2 + |B| dS^2)) at y = T
  double deviation_coord = 0.0;
  double deviation_metric = 0.0;
  double max_dR = 0.0;
};

// Leapfrog in y (y is time), centred differences in x, Dirichlet data from the
// reference map at both x ends. The reference also supplies the initial
// values and y-derivatives at y = 0.
WaveResult wave_evolve(const TargetMetric& metric, const MapEvaluator& reference,
                       const WaveEvolveConfig& cfg, Interval x_range);

// Smooth poles of the target: B(R*) = 0 with B''(R*) = 2 A(R*), del2 = -1.
std::vector<double> smooth_poles(const TargetMetric& metric);

}  // namespace hmaps
