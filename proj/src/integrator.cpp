#include "hmaps/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hmaps/errors.hpp"

namespace hmaps {

const char* to_string(StepMethod m) {
  switch (m) {
    case StepMethod::rk4_second_order: return "rk4_second_order";
    case StepMethod::velocity_verlet: return "velocity_verlet";
  }
  return "?";
}

StepMethod parse_step_method(std::string_view name) {
  if (name == "rk4_second_order" || name == "rk4") return StepMethod::rk4_second_order;
  if (name == "velocity_verlet" || name == "verlet") return StepMethod::velocity_verlet;
  throw ValidationError("unknown integration method '" + std::string(name) +
                        "' (expected rk4_second_order or velocity_verlet)");
}

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  if (!(invariant_tol > 0.0)) throw ValidationError("invariant_tol must be positive");
  if (max_steps < 1) throw ValidationError("max_steps must be at least 1");
}

double ODESolution::max_drift() const {
  double m = 0.0;
  for (double d : drift) m = std::max(m, d);
  return m;
}

namespace {

struct State {
  double r;
  double v;
};

std::size_t steps_for(double span, double dt) {
  if (span <= 0.0) return 0;
  return static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt * (1.0 - 1e-12))));
}

class Stepper {
 public:
  Stepper(const Reduction& red, StepMethod method) : red_(red), method_(method) {}

  // Increment over one step; the caller adds it with compensation.
  State increment(State s, double h) const {
    if (method_ == StepMethod::velocity_verlet) {
      const double vh = s.v + 0.5 * h * force(s.r);
      const double dr = h * vh;
      return {dr, (vh - s.v) + 0.5 * h * force(s.r + dr)};
    }
    const double k1r = s.v;
    const double k1v = force(s.r);
    const double k2r = s.v + 0.5 * h * k1v;
    const double k2v = force(s.r + 0.5 * h * k1r);
    const double k3r = s.v + 0.5 * h * k2v;
    const double k3v = force(s.r + 0.5 * h * k2r);
    const double k4r = s.v + h * k3v;
    const double k4v = force(s.r + h * k3r);
    return {h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r),
            h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
  }

 private:
  double force(double r) const { return 0.5 * red_.phi_prime(r); }

  const Reduction& red_;
  StepMethod method_;
};

struct Track {
  std::vector<double> ts;
  std::vector<double> rs;
  std::vector<double> vs;
  std::vector<double> drift;
};

// Marches n steps of size h (h may be negative) from the seed state.
Track march(const Reduction& red, const Stepper& stepper, State s, double t_seed, double h,
            std::size_t n, double budget) {
  Track tr;
  tr.ts.reserve(n + 1);
  tr.rs.reserve(n + 1);
  tr.vs.reserve(n + 1);
  tr.drift.reserve(n + 1);
  const TargetMetric& metric = red.metric();
  auto record = [&](double t, State st) {
    const double d = std::abs(st.v * st.v - red.phi(st.r));
    if (!std::isfinite(d)) {
      std::ostringstream os;
      os << "non-finite state at t = " << t << " (R = " << st.r << ")";
      throw NumericalError(os.str());
    }
    if (d > budget) {
      std::ostringstream os;
      os.precision(10);
      os << "drift budget exceeded at t = " << t << ": |R'^2 - phi(R)| = " << d
         << " > " << budget;
      throw NumericalError(os.str());
    }
    tr.ts.push_back(t);
    tr.rs.push_back(st.r);
    tr.vs.push_back(st.v);
    tr.drift.push_back(d);
  };
  record(t_seed, s);
  // Kahan compensation: thousands of small increments otherwise leave a
  // round-off floor above the truncation error of RK4 at small dt.
  State comp{0.0, 0.0};
  auto add = [](double& sum, double& c, double inc) {
    const double y = inc - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  };
  for (std::size_t k = 1; k <= n; ++k) {
    const double t = t_seed + static_cast<double>(k) * h;
    try {
      const State inc = stepper.increment(s, h);
      add(s.r, comp.r, inc.r);
      add(s.v, comp.v, inc.v);
      metric.require_regular(s.r);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os.precision(12);
      os << "R left the chart near t = " << t << " (last R = " << tr.rs.back() << "): " << e.what();
      throw DomainError(os.str());
    }
    record(t, s);
  }
  return tr;
}

void detect_events(const Reduction& red, ODESolution& sol) {
  double last_sign = 0.0;
  std::size_t last_idx = 0;
  bool near_double = false;
  for (std::size_t i = 0; i < sol.ts.size(); ++i) {
    const double v = sol.Rps[i];
    if (v != 0.0) {
      const double sg = v > 0.0 ? 1.0 : -1.0;
      if (last_sign != 0.0 && sg != last_sign) {
        const double v0 = sol.Rps[last_idx];
        const double t0 = sol.ts[last_idx];
        const double t1 = sol.ts[i];
        sol.turning_events.push_back(t0 + (t1 - t0) * v0 / (v0 - v));
      }
      last_sign = sg;
      last_idx = i;
    }
    const double r = sol.Rs[i];
    const bool at_double = std::abs(red.phi(r)) <= 1e-12 && std::abs(red.phi_prime(r)) <= 1e-6;
    if (at_double && !near_double) sol.double_root_events.push_back(sol.ts[i]);
    near_double = at_double;
  }
}

}  // namespace

ODESolution integrate_state(const TargetMetric& metric, const ReductionParams& params, double r0,
                            double rp0, Interval t_span, const IntegratorConfig& cfg,
                            std::optional<double> t_seed) {
  cfg.validate();
  if (!std::isfinite(t_span.lo) || !std::isfinite(t_span.hi) || !(t_span.lo < t_span.hi)) {
    throw ValidationError("t span must be a finite interval with t0 < t1");
  }
  const double seed = t_seed.value_or(t_span.lo);
  if (seed < t_span.lo || seed > t_span.hi) {
    throw ValidationError("seed time must lie inside the t span");
  }
  metric.require_regular(r0);

  const Reduction red(metric, params);
  const Stepper stepper(red, cfg.method);
  const std::size_t n_fwd = steps_for(t_span.hi - seed, cfg.dt);
  const std::size_t n_bwd = steps_for(seed - t_span.lo, cfg.dt);
  if (n_fwd + n_bwd > cfg.max_steps) {
    std::ostringstream os;
    os << "max_steps exceeded: span needs " << n_fwd + n_bwd << " steps, limit " << cfg.max_steps;
    throw NumericalError(os.str());
  }
  const double budget = cfg.invariant_tol * (t_span.hi - t_span.lo);
  const State s0{r0, rp0};

  Track fwd = march(red, stepper, s0, seed, n_fwd ? (t_span.hi - seed) / n_fwd : 0.0, n_fwd, budget);
  Track bwd;
  if (n_bwd > 0) bwd = march(red, stepper, s0, seed, -(seed - t_span.lo) / n_bwd, n_bwd, budget);

  ODESolution sol;
  const std::size_t total = n_fwd + n_bwd + 1;
  sol.ts.reserve(total);
  sol.Rs.reserve(total);
  sol.Rps.reserve(total);
  sol.drift.reserve(total);
  for (std::size_t k = n_bwd; k >= 1; --k) {
    sol.ts.push_back(bwd.ts[k]);
    sol.Rs.push_back(bwd.rs[k]);
    sol.Rps.push_back(bwd.vs[k]);
    sol.drift.push_back(bwd.drift[k]);
  }
  sol.seed_index = n_bwd;
  sol.ts.insert(sol.ts.end(), fwd.ts.begin(), fwd.ts.end());
  sol.Rs.insert(sol.Rs.end(), fwd.rs.begin(), fwd.rs.end());
  sol.Rps.insert(sol.Rps.end(), fwd.vs.begin(), fwd.vs.end());
  sol.drift.insert(sol.drift.end(), fwd.drift.begin(), fwd.drift.end());
  sol.ts.front() = n_bwd ? t_span.lo : sol.ts.front();
  sol.ts.back() = t_span.hi;

  detect_events(red, sol);
  return sol;
}

ODESolution integrate_R(const TargetMetric& metric, const ReductionParams& params, double r0,
                        int sign0, Interval t_span, const IntegratorConfig& cfg,
                        std::optional<double> t_seed) {
  if (sign0 != 1 && sign0 != -1) throw ValidationError("initial sign must be -1 or +1");
  const double p0 = phi(metric, params, r0);
  if (p0 < -1e-12) {
    std::ostringstream os;
    os.precision(12);
    os << "phi(R0) = " << p0 << " < 0 at R0 = " << r0
       << ": no real solution starts there (R0 is outside every admissible interval)";
    throw ValidationError(os.str());
  }
  return integrate_state(metric, params, r0, sign0 * std::sqrt(std::max(p0, 0.0)), t_span, cfg,
                         t_seed);
}

namespace {

// Cumulative integral of samples f[0..n] with uniform (signed) step h.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size() - 1;
  std::vector<double> I(f.size(), 0.0);
  if (n == 0) return I;
  if (n == 1) {
    I[1] = 0.5 * h * (f[0] + f[1]);
    return I;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    if (k % 2 == 0) {
      I[k] = I[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    } else if (k + 1 <= n) {
      I[k] = I[k - 1] + h / 12.0 * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1]);
    } else {
      I[k] = I[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k]);
    }
  }
  return I;
}

}  // namespace

ODESolution quadrature_H(const TargetMetric& metric, const ReductionParams& params,
                         ODESolution sol) {
  if (sol.ts.empty()) throw ValidationError("empty solution");
  const Reduction red(metric, params);
  const std::size_t n = sol.ts.size();
  sol.Hps.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      sol.Hps[i] = red.h_prime(sol.Rs[i]);
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "H' undefined along the path at t = " << sol.ts[i] << ": " << e.what();
      throw DomainError(os.str());
    }
  }
  sol.Hs.assign(n, 0.0);
  const std::size_t s = sol.seed_index;
  if (s + 1 < n) {
    std::vector<double> f(sol.Hps.begin() + static_cast<std::ptrdiff_t>(s), sol.Hps.end());
    const double h = (sol.ts.back() - sol.ts[s]) / static_cast<double>(n - 1 - s);
    const auto I = cumulative_simpson(f, h);
    for (std::size_t k = 0; k < I.size(); ++k) sol.Hs[s + k] = I[k];
  }
  if (s > 0) {
    std::vector<double> f;
    f.reserve(s + 1);
    for (std::size_t k = 0; k <= s; ++k) f.push_back(sol.Hps[s - k]);
    const double h = (sol.ts.front() - sol.ts[s]) / static_cast<double>(s);
    const auto I = cumulative_simpson(f, h);
    for (std::size_t k = 0; k < I.size(); ++k) sol.Hs[s - k] = I[k];
  }
  return sol;
}

ProfileSample interpolate(const ODESolution& sol, double t) {
  if (!sol.has_h()) throw ValidationError("interpolation needs H; run quadrature_H first");
  const double tol = 1e-12 * (1.0 + std::abs(t));
  if (sol.ts.size() < 2 || t < sol.ts.front() - tol || t > sol.ts.back() + tol) {
    std::ostringstream os;
    os << "t = " << t << " is outside the solution range [" << sol.ts.front() << ", "
       << sol.ts.back() << "]";
    throw ValidationError(os.str());
  }
  auto it = std::upper_bound(sol.ts.begin(), sol.ts.end(), t);
  std::size_t i = it == sol.ts.begin() ? 0 : static_cast<std::size_t>(it - sol.ts.begin()) - 1;
  i = std::min(i, sol.ts.size() - 2);
  const double t0 = sol.ts[i];
  const double h = sol.ts[i + 1] - t0;
  const double u = (t - t0) / h;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  const double d00 = (6 * u2 - 6 * u) / h;
  const double d10 = 3 * u2 - 4 * u + 1;
  const double d01 = (-6 * u2 + 6 * u) / h;
  const double d11 = 3 * u2 - 2 * u;

  auto hermite = [&](const std::vector<double>& v, const std::vector<double>& dv, double& val,
                     double& der) {
    val = h00 * v[i] + h10 * h * dv[i] + h01 * v[i + 1] + h11 * h * dv[i + 1];
    der = d00 * v[i] + d10 * dv[i] + d01 * v[i + 1] + d11 * dv[i + 1];
  };
  ProfileSample out;
  hermite(sol.Rs, sol.Rps, out.R, out.Rp);
  hermite(sol.Hs, sol.Hps, out.H, out.Hp);
  return out;
}

void Lattice::validate() const {
  if (nx < 2 || ny < 2) throw ValidationError("lattice needs nx, ny >= 2");
  if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !std::isfinite(y_lo) ||
      !std::isfinite(y_hi) || !(x_lo < x_hi) || !(y_lo < y_hi)) {
    throw ValidationError("lattice ranges must be finite with lo < hi");
  }
}

std::vector<double> Lattice::xs() const { return linspace(x_lo, x_hi, nx); }
std::vector<double> Lattice::ys() const { return linspace(y_lo, y_hi, ny); }

MapSample assemble_map(const ODESolution& sol, const ReductionParams& params,
                       const Lattice& grid) {
  grid.validate();
  MapSample out;
  out.a = params.a();
  out.b = params.b();
  out.xs = grid.xs();
  out.ys = grid.ys();
  const TravelingFrame frame{params.a(), params.b()};
  out.points.reserve(out.xs.size() * out.ys.size());
  for (double y : out.ys) {
    for (double x : out.xs) {
      const double t = frame.t(x, y);
      ProfileSample p;
      try {
        p = interpolate(sol, t);
      } catch (const ValidationError& e) {
        std::ostringstream os;
        os << "grid point (" << x << ", " << y << ") needs " << e.what();
        throw ValidationError(os.str());
      }
      out.points.push_back({x, y, t, p.R, params.a() * x + params.b() * y + p.H});
    }
  }
  return out;
}

}  // namespace hmaps
