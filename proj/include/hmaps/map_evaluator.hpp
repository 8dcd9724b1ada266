#pragma once

namespace hmaps {

struct MapValue {
  double R = 0.0;
  double S = 0.0;
};

// Values with the first and pure second partials used by the
// Euler-Lagrange operator (mixed partials never enter it).
struct MapJet {
  double R = 0.0;
  double S = 0.0;
  double Rx = 0.0;
  double Ry = 0.0;
  double Sx = 0.0;
  double Sy = 0.0;
  double Rxx = 0.0;
  double Ryy = 0.0;
  double Sxx = 0.0;
  double Syy = 0.0;
};

// A map u = (R, S) of the (x, y) plane, optionally with analytic derivatives.
class MapEvaluator {
 public:
  virtual ~MapEvaluator() = default;

  virtual MapValue eval(double x, double y) const = 0;
  virtual bool has_analytic_derivatives() const { return false; }
  // Only meaningful when has_analytic_derivatives() is true.
  virtual MapJet derivs(double x, double y) const;
};

}  // namespace hmaps
