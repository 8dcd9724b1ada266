#pragma once

#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hmaps {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Open interval (lo, hi); either end may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool contains(double r) const { return r > lo && r < hi; }
  bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
  double width() const { return hi - lo; }
};

// The two regime switches as real signs: eps2 is the square of the domain
// switch (-1 Riemannian, +1 Lorentzian), del2 the same for the target fiber.
class SignaturePair {
 public:
  SignaturePair(int eps2, int del2);

  int eps2() const { return eps2_; }
  int del2() const { return del2_; }

  friend bool operator==(const SignaturePair&, const SignaturePair&) = default;

 private:
  int eps2_;
  int del2_;
};

using ScalarFn = std::function<double(double)>;

// A positive radial function with its first two derivatives.
class RadialProfile {
 public:
  RadialProfile(ScalarFn value, ScalarFn deriv, ScalarFn second_deriv, Interval domain);

  static RadialProfile constant(double c);

  double value(double r) const { return value_(r); }
  double deriv(double r) const { return deriv_(r); }
  double second_deriv(double r) const { return second_(r); }
  const Interval& domain() const { return domain_; }

 private:
  ScalarFn value_;
  ScalarFn deriv_;
  ScalarFn second_;
  Interval domain_;
};

using ParamList = std::map<std::string, double, std::less<>>;

// Warped-product target h = A(R) dR^2 - del2 B(R) dS^2.
//
// Singular points are R values where B vanishes. They are metadata: the metric
// is constructed fine, but evaluations there throw DomainError.
class TargetMetric {
 public:
  TargetMetric(std::string name, RadialProfile A, RadialProfile B, int del2, Interval r_domain,
               std::vector<double> singular_points, Interval sample_window, ParamList params = {});

  const std::string& name() const { return name_; }
  const RadialProfile& A() const { return A_; }
  const RadialProfile& B() const { return B_; }
  int del2() const { return del2_; }
  const Interval& r_domain() const { return r_domain_; }
  const std::vector<double>& singular_points() const { return singular_; }
  const ParamList& params() const { return params_; }

  // Finite sub-interval of r_domain used for default sampling and listings.
  const Interval& sample_window() const { return window_; }

  double a(double r) const { return A_.value(r); }
  double a_prime(double r) const { return A_.deriv(r); }
  double a_second(double r) const { return A_.second_deriv(r); }
  double b(double r) const { return B_.value(r); }
  double b_prime(double r) const { return B_.deriv(r); }
  double b_second(double r) const { return B_.second_deriv(r); }

  bool in_domain(double r) const { return r_domain_.contains(r); }
  bool near_singular(double r, double tol = 1e-12) const;

  // Throws DomainError unless r is inside the domain and off every singular point.
  void require_regular(double r) const;

 private:
  std::string name_;
  RadialProfile A_;
  RadialProfile B_;
  int del2_;
  Interval r_domain_;
  std::vector<double> singular_;
  Interval window_;
  ParamList params_;
};

// Domain metric g = exp(f(x,y)) (dx^2 - eps2 dy^2).
class DomainMetric {
 public:
  using ConformalFactor = std::function<double(double, double)>;

  explicit DomainMetric(int eps2, ConformalFactor f = {});

  int eps2() const { return eps2_; }
  double conformal_factor(double x, double y) const;

 private:
  int eps2_;
  ConformalFactor f_;
};

struct CatalogEntry {
  std::string_view name;
  std::string_view model;
  int table;  // 1 = constant curvature, 2 = variable curvature, 0 = extension
  std::vector<std::string_view> required;
  ParamList optional;  // name -> default
  ParamList listing_defaults;
};

std::span<const CatalogEntry> catalog();

TargetMetric catalog_lookup(std::string_view name, const ParamList& params);

// Gaussian curvature of E dR^2 + G dS^2 with E = A, G = -del2 B.
double gauss_curvature(const TargetMetric& metric, double r);

struct CurvatureClass {
  bool constant = false;
  double mean = 0.0;
  double spread = 0.0;  // max - min over the samples
};

CurvatureClass curvature_classify(const TargetMetric& metric, std::span<const double> samples);

// n evenly spaced points in [lo, hi] (inclusive).
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace hmaps
