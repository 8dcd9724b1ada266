#pragma once
// Reference formulas written directly from the defining expressions, without
// going through the library, for use as expected values in the tests.

#include <array>
#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Required R'^2 for the traveling-frame ansatz, expanded by hand.
inline double phi(double A, double B, int eps2, int del2, double a, double b, double kappa,
                  double lambda) {
  const double s = a * a + b * b;
  const double mix = b * b + eps2 * a * a;
  const double gap = b * b - eps2 * a * a;
  const double c1 = del2 * eps2 * s * s * s * s;
  const double c2 = 4.0 * s * s * mix;
  const double c3 = 8.0 * eps2 * a * b * s * s;
  const double q = 2.0 * kappa * a * b + lambda * mix;
  const double c4 = 4.0 * del2 * q * q;
  return (c1 * B * B + (c2 * kappa + c3 * lambda) * B + c4) / (s * s * gap * gap * A * B);
}

inline double h_prime(double B, int eps2, int del2, double a, double b, double kappa,
                      double lambda) {
  const double s = a * a + b * b;
  const double num = 2.0 * lambda * del2 * (b * b + eps2 * a * a) + 4.0 * kappa * del2 * a * b +
                     a * b * s * (eps2 + 1) * B;
  return num / ((b * b - eps2 * a * a) * s * B);
}

// Ellipsoid family with a = 0, b = 1 (t = -x): u = t / sqrt(c^2 - 1).
inline double ellipsoid_R(double c, double theta, double t) {
  return std::acos(std::cos(theta) * std::sin(t / std::sqrt(c * c - 1.0)));
}

// arctan(q tan u) continued through the poles of tan.
inline double unwrapped_arctan(double q, double u) {
  const double k = std::floor(u / pi + 0.5);
  const double v = u - k * pi;  // in [-pi/2, pi/2)
  double base;
  if (std::abs(std::abs(v) - pi / 2) < 1e-15) {
    base = std::copysign(pi / 2, v);
  } else {
    base = std::atan(q * std::tan(v));
  }
  return base + k * pi;
}

inline double ellipsoid_H(double c, double theta, double t) {
  return unwrapped_arctan(std::sin(theta), t / std::sqrt(c * c - 1.0));
}

// Ellipsoid metric profiles.
inline double ellipsoid_A(double c, double r) {
  return c * c * std::sin(r) * std::sin(r) + std::cos(r) * std::cos(r);
}
inline double ellipsoid_B(double r) { return std::sin(r) * std::sin(r); }

// Gaussian curvature of the level set F = x^2/c^2 + y^2 + z^2 = 1 at the point
// with polar parameter R, from grad F and the adjugate of Hess F.
inline double ellipsoid_K_ambient(double c, double R) {
  const std::array<double, 3> p{c * std::cos(R), std::sin(R), 0.0};
  const std::array<double, 3> g{2.0 * p[0] / (c * c), 2.0 * p[1], 2.0 * p[2]};
  const std::array<double, 3> h{2.0 / (c * c), 2.0, 2.0};
  const std::array<double, 3> adj{h[1] * h[2], h[0] * h[2], h[0] * h[1]};
  const double num = adj[0] * g[0] * g[0] + adj[1] * g[1] * g[1] + adj[2] * g[2] * g[2];
  const double n2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
  return num / (n2 * n2);
}

// Mixed family: a = sin(theta), b = cos(theta), D = b^2 - eps2 a^2.
inline double mixed_R(double theta, int eps2, double x, double y) {
  const double a = std::sin(theta), b = std::cos(theta);
  const double D = b * b - eps2 * a * a;
  return std::asinh((a * y - b * x) / D);
}
inline double mixed_S(double theta, int eps2, double x, double y) {
  const double a = std::sin(theta), b = std::cos(theta);
  const double D = b * b - eps2 * a * a;
  return a * x + b * y + (1.0 + eps2) * a * b / D * (a * y - b * x);
}

}  // namespace oracle
