#pragma once

#include <array>

#include "hmaps/integrator.hpp"
#include "hmaps/map_evaluator.hpp"
#include "hmaps/reduction.hpp"

namespace hmaps {

enum class Family { ellipsoid, hyperboloid, mixed };

const char* to_string(Family f);
Family parse_family(std::string_view name);

// R and H along the frame coordinate t = a y - b x, with two t-derivatives.
struct ProfileJet {
  double R = 0.0;
  double Rt = 0.0;
  double Rtt = 0.0;
  double H = 0.0;
  double Ht = 0.0;
  double Htt = 0.0;
};

// One of the three explicit traveling-wave families
//   R(x, y) = R(t),  S(x, y) = a x + b y + H(t),  t = a y - b x.
class ClosedFormMap final : public MapEvaluator {
 public:
  Family family() const { return family_; }
  double c() const { return c_; }
  double theta() const { return theta_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const SignaturePair& sig() const { return sig_; }

  // The target this family maps into.
  TargetMetric target() const;

  ProfileJet profile(double t) const;

  MapValue eval(double x, double y) const override;
  bool has_analytic_derivatives() const override { return true; }
  MapJet derivs(double x, double y) const override;

  // (kappa, lambda) recovered from the profile at frame time t.
  FirstIntegrals first_integrals_at(double t) const;

  friend ClosedFormMap ellipsoid_map(double c, double theta, double a, double b);
  friend ClosedFormMap hyperboloid_map(double c, double theta, double a, double b);
  friend ClosedFormMap mixed_map(double theta, int eps2);

 private:
  ClosedFormMap(Family family, double c, double theta, double a, double b, SignaturePair sig);

  Family family_;
  double c_;
  double theta_;
  double a_;
  double b_;
  SignaturePair sig_;
  double rate_;    // d(phase)/dt
  double linear_;  // linear part of H (hyperboloid and mixed)
};

// Riemannian map into the ellipsoid x^2/c^2 + y^2 + z^2 = 1.
ClosedFormMap ellipsoid_map(double c, double theta, double a, double b);

// Lorentzian wave map into the one-sheet hyperboloid x^2/c^2 + y^2 - z^2 = 1.
ClosedFormMap hyperboloid_map(double c, double theta, double a, double b);

// Mixed signature (del2 = -eps2) map into dR^2 - del2 tanh^2 R dS^2.
ClosedFormMap mixed_map(double theta, int eps2);

// Values of the map on a lattice, with t = a y - b x filled in.
MapSample sample_map(const ClosedFormMap& map, const Lattice& grid);

enum class Quadric { ellipsoid, hyperboloid };
enum class AmbientSignature { euclidean, minkowski };

Quadric parse_quadric(std::string_view name);

struct EmbeddingR3 {
  AmbientSignature ambient = AmbientSignature::euclidean;
  std::array<double, 3> point{};
};

EmbeddingR3 embed(Quadric quadric, double c, double R, double S);

// X^2/c^2 + Y^2 +- Z^2 - 1.
double quadric_residual(Quadric quadric, double c, const EmbeddingR3& e);

struct InducedMetric {
  std::array<std::array<double, 2>, 2> pullback{};
  std::array<std::array<double, 2>, 2> expected{};
  double residual = 0.0;  // max-abs entrywise difference
};

InducedMetric induced_metric_check(Quadric quadric, double c, double R, double S);

}  // namespace hmaps
