#include "hmaps/run.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hmaps/closed_forms.hpp"
#include "hmaps/errors.hpp"
#include "hmaps/export.hpp"
#include "hmaps/integrator.hpp"
#include "hmaps/verifier.hpp"
#include "hmaps/wave.hpp"

namespace hmaps {

namespace {

using Fields = std::vector<std::pair<std::string, Cell>>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

bool wants_json(const RunConfig& cfg, const std::string& path) {
  if (cfg.given("format")) {
    const std::string f = cfg.text("format");
    if (f == "json") return true;
    if (f == "csv") return false;
    throw ValidationError("format must be csv or json");
  }
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

Meta meta_of(const RunConfig& cfg, const Fields& extra = {}) {
  Meta m{{"subcommand", to_string(cfg.subcommand)}};
  if (!cfg.action.empty()) m.emplace_back("action", cfg.action);
  for (auto& kv : cfg.resolved()) m.push_back(kv);
  for (const auto& [k, v] : extra) {
    m.emplace_back(k, std::holds_alternative<double>(v) ? format_double(std::get<double>(v))
                                                         : std::get<std::string>(v));
  }
  return m;
}

// Writes to `path` if non-empty, otherwise to the stream.
void emit(const RunConfig& cfg, const Table& t, const std::string& path, std::ostream& out,
          const Fields& extra = {}) {
  const std::string body = wants_json(cfg, path) ? to_json(t, meta_of(cfg, extra)) : to_csv(t);
  if (path.empty()) {
    out << body;
  } else {
    write_file(path, body);
  }
}

std::string out_path(const RunConfig& cfg, std::string_view key = "out") {
  return cfg.given(key) ? cfg.text(key) : std::string();
}

SignaturePair signature(const RunConfig& cfg) {
  cfg.require({"eps2", "del2"});
  return SignaturePair(cfg.integer("eps2"), cfg.integer("del2"));
}

TargetMetric metric_of(const RunConfig& cfg, const SignaturePair* sig) {
  cfg.require({"metric"});
  TargetMetric m = catalog_lookup(cfg.text("metric"), cfg.metric_params());
  if (sig && sig->del2() != m.del2()) {
    std::ostringstream os;
    os << "del2 = " << sig->del2() << " does not match metric " << m.name() << " (del2 = "
       << m.del2() << ")";
    throw ValidationError(os.str());
  }
  return m;
}

ReductionParams params_of(const RunConfig& cfg, const SignaturePair& sig) {
  cfg.require({"a", "b", "kappa", "lambda"});
  return ReductionParams(cfg.real("a"), cfg.real("b"), cfg.real("kappa"), cfg.real("lambda"),
                         sig);
}

Lattice lattice_of(const RunConfig& cfg) {
  Lattice g{cfg.real("x_min"), cfg.real("x_max"), cfg.real("y_min"), cfg.real("y_max"),
            cfg.integer("nx"), cfg.integer("ny")};
  g.validate();
  return g;
}

GridSpec grid_of(const RunConfig& cfg) {
  GridSpec g;
  g.x = {cfg.real("x_min"), cfg.real("x_max")};
  g.y = {cfg.real("y_min"), cfg.real("y_max")};
  g.nx = cfg.integer("nx");
  g.ny = cfg.integer("ny");
  g.fd_h = cfg.real("fd_h");
  g.fd_order = cfg.integer("fd_order");
  g.validate();
  return g;
}

ClosedFormMap family_of(const RunConfig& cfg) {
  cfg.require({"family"});
  const Family f = parse_family(cfg.text("family"));
  if (f == Family::mixed) {
    cfg.require({"theta", "eps2"});
    return mixed_map(cfg.real("theta"), cfg.integer("eps2"));
  }
  cfg.require({"c", "theta", "a", "b"});
  if (f == Family::ellipsoid) {
    return ellipsoid_map(cfg.real("c"), cfg.real("theta"), cfg.real("a"), cfg.real("b"));
  }
  return hyperboloid_map(cfg.real("c"), cfg.real("theta"), cfg.real("a"), cfg.real("b"));
}

void print_fields(std::ostream& out, const Fields& f) { out << to_csv(report_table(f)); }

void run_metrics(const RunConfig& cfg, std::ostream& out) {
  if (cfg.action == "list") {
    Table t{{"name", "model", "table", "del2", "r_min", "r_max", "curvature", "K_mean"}, {}};
    for (const CatalogEntry& e : catalog()) {
      const TargetMetric m = catalog_lookup(e.name, e.listing_defaults);
      const Interval w = m.sample_window();
      const auto samples = linspace(w.lo, w.hi, 33);
      const CurvatureClass k = curvature_classify(m, samples);
      t.rows.push_back({std::string(e.name), std::string(e.model), double(e.table),
                        double(m.del2()), m.r_domain().lo, m.r_domain().hi,
                        std::string(k.constant ? "constant" : "variable"), k.mean});
    }
    emit(cfg, t, out_path(cfg), out);
    return;
  }
  const TargetMetric m = metric_of(cfg, nullptr);
  const double lo = cfg.given("r_min") ? cfg.real("r_min") : m.sample_window().lo;
  const double hi = cfg.given("r_max") ? cfg.real("r_max") : m.sample_window().hi;
  const int n = cfg.integer("samples");
  if (n < 1) throw ValidationError("samples must be >= 1");
  if (!(lo <= hi)) throw ValidationError("r_min must not exceed r_max");
  Table t{{"R", "K"}, {}};
  for (double r : n == 1 ? std::vector<double>{lo} : linspace(lo, hi, n)) {
    t.rows.push_back({r, gauss_curvature(m, r)});
  }
  emit(cfg, t, out_path(cfg), out);
}

void run_solve(const RunConfig& cfg, std::ostream& out) {
  const SignaturePair sig = signature(cfg);
  const TargetMetric m = metric_of(cfg, &sig);
  const ReductionParams p = params_of(cfg, sig);
  cfg.require({"r0", "t1"});
  IntegratorConfig ic;
  ic.dt = cfg.real("dt");
  ic.method = parse_step_method(cfg.text("method"));
  ic.invariant_tol = cfg.real("invariant_tol");
  const int max_steps = cfg.integer("max_steps");
  if (max_steps < 1) throw ValidationError("max_steps must be >= 1");
  ic.max_steps = std::size_t(max_steps);
  const Interval span{cfg.real("t0"), cfg.real("t1")};
  std::optional<double> seed;
  if (cfg.given("t_seed")) seed = cfg.real("t_seed");

  ODESolution sol;
  if (cfg.given("rp0")) {
    sol = integrate_state(m, p, cfg.real("r0"), cfg.real("rp0"), span, ic, seed);
  } else {
    const int sign = cfg.integer("sign");
    if (sign != 1 && sign != -1) throw ValidationError("sign must be 1 or -1");
    sol = integrate_R(m, p, cfg.real("r0"), sign, span, ic, seed);
  }
  sol = quadrature_H(m, p, std::move(sol));

  const std::string path = out_path(cfg);
  Fields summary{{"samples", double(sol.size())},
                 {"max_drift", sol.max_drift()},
                 {"turning_events", double(sol.turning_events.size())},
                 {"double_root_events", double(sol.double_root_events.size())}};
  for (std::size_t i = 0; i < sol.turning_events.size(); ++i) {
    summary.emplace_back("turning_t_" + std::to_string(i), sol.turning_events[i]);
  }
  emit(cfg, solution_table(sol), path, out, summary);
  if (cfg.given("map_out")) {
    const MapSample s = assemble_map(sol, p, lattice_of(cfg));
    emit(cfg, map_table(s), cfg.text("map_out"), out);
  }
  if (!path.empty()) print_fields(out, summary);
}

void run_closedform(const RunConfig& cfg, std::ostream& out) {
  const ClosedFormMap map = family_of(cfg);
  const std::string path = out_path(cfg);
  const bool recover = cfg.flag("recover");
  if (!path.empty() || !recover) {
    const MapSample s = sample_map(map, lattice_of(cfg));
    if (cfg.flag("embed")) {
      const Quadric q = parse_quadric(to_string(map.family()));
      emit(cfg, embedding_table(s, q, map.c()), path, out);
    } else {
      emit(cfg, map_table(s), path, out);
    }
  }
  if (recover) {
    const double t = cfg.real("t0");
    const FirstIntegrals k = map.first_integrals_at(t);
    print_fields(out, {{"t", t}, {"kappa", k.kappa}, {"lambda", k.lambda}});
  }
}

void run_verify(const RunConfig& cfg, std::ostream& out) {
  const bool fam = cfg.given("family");
  const bool input = cfg.given("input");
  const bool solution = cfg.given("solution");
  if (!fam && !input && !solution) {
    throw ValidationError("verify needs --family, --input or --solution");
  }
  if (fam && input) throw ValidationError("verify takes either --family or --input, not both");
  Fields f;
  ResidualReport rep;
  if (fam) {
    const ClosedFormMap map = family_of(cfg);
    const TargetMetric m = map.target();
    const GridSpec g = grid_of(cfg);
    rep = el_residual(map, m, map.sig(), g, DerivativeSource::analytic);
    const ConvergenceReport conv = el_convergence(map, m, map.sig(), g);
    rep.observed_order = conv.fine.observed_order;
    f = report_fields(rep);
    f.emplace_back("fd_sup_E1_h", conv.coarse.sup_E1);
    f.emplace_back("fd_sup_E2_h", conv.coarse.sup_E2);
    f.emplace_back("fd_sup_E1_h2", conv.fine.sup_E1);
    f.emplace_back("fd_sup_E2_h2", conv.fine.sup_E2);
    f.emplace_back("fd_ratio_E1", conv.ratio_E1);
    f.emplace_back("fd_ratio_E2", conv.ratio_E2);
  } else if (input) {
    const SignaturePair sig = signature(cfg);
    const TargetMetric m = metric_of(cfg, &sig);
    rep = el_residual(read_map_csv(read_file(cfg.text("input"))), m, sig);
    f = report_fields(rep);
  }
  if (solution) {
    const SignaturePair sig = signature(cfg);
    const TargetMetric m = metric_of(cfg, &sig);
    const ReductionParams p = params_of(cfg, sig);
    ODESolution sol = read_solution_csv(read_file(cfg.text("solution")));
    const Reduction red(m, p);
    sol.Hps.clear();
    for (double r : sol.Rs) sol.Hps.push_back(red.h_prime(r));
    const ResidualReport g = first_integral_residual(m, p, sol);
    rep.sup_G1 = g.sup_G1;
    rep.sup_G2 = g.sup_G2;
    rep.worst_G1_t = g.worst_G1_t;
    rep.worst_G2_t = g.worst_G2_t;
    rep.K_samples = g.K_samples;
    if (!fam && !input) rep.points = g.points;
    f = report_fields(rep);
  }
  emit(cfg, report_table(f), out_path(cfg), out);
}

void run_evolve(const RunConfig& cfg, std::ostream& out) {
  const ClosedFormMap map = family_of(cfg);
  if (map.sig().eps2() != 1) {
    throw ValidationError("evolve needs a Lorentzian domain (eps2 = 1)");
  }
  WaveEvolveConfig wc;
  wc.dx = cfg.real("dx");
  wc.cfl = cfg.real("cfl");
  wc.T = cfg.real("T");
  wc.chart = parse_wave_chart(cfg.text("chart"));
  wc.sweeps = cfg.integer("sweeps");
  const TargetMetric m = map.target();
  const WaveResult r = wave_evolve(m, map, wc, {cfg.real("x_min"), cfg.real("x_max")});
  Fields f{{"chart", std::string(to_string(r.chart))},
           {"dx", r.dx},
           {"dy", r.dy},
           {"steps", double(r.steps)},
           {"deviation_metric", r.deviation_metric},
           {"deviation_coord", r.deviation_coord},
           {"max_abs_dR", r.max_dR}};
  if (r.pole) f.emplace_back("pole", *r.pole);
  emit(cfg, report_table(f), out_path(cfg), out);
  if (cfg.given("fields_out")) {
    Table t{{"x", "R", "S", "R_ref", "S_ref"}, {}};
    for (std::size_t i = 0; i < r.xs.size(); ++i) {
      t.rows.push_back({r.xs[i], r.R[i], r.S[i], r.R_ref[i], r.S_ref[i]});
    }
    emit(cfg, t, cfg.text("fields_out"), out);
  }
}

}  // namespace

void run(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.subcommand) {
    case Subcommand::metrics: return run_metrics(cfg, out);
    case Subcommand::solve: return run_solve(cfg, out);
    case Subcommand::closedform: return run_closedform(cfg, out);
    case Subcommand::verify: return run_verify(cfg, out);
    case Subcommand::evolve: return run_evolve(cfg, out);
  }
}

std::string usage() {
  return "usage: hmaps <subcommand> [--config FILE] [--key value ...]\n"
         "\n"
         "subcommands:\n"
         "  metrics list                      catalog with signature and curvature class\n"
         "  metrics curvature --name M        K(R) table (--samples, --r-min, --r-max)\n"
         "  solve                             reduced ODE + quadrature -> t,R,Rprime,H,drift\n"
         "  closedform --family F             explicit family on a grid (--embed, --recover)\n"
         "  verify                            residuals for --family, --input map.csv,\n"
         "                                    --solution sol.csv\n"
         "  evolve --family F                 wave evolution vs the exact map\n"
         "\n"
         "metric parameters: --param name=value (or --c for c)\n"
         "exit status: 0 ok, 2 invalid input, 3 numerical failure\n";
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err, bool color) {
  const char* tag = color ? "\x1b[31merror\x1b[0m" : "error";
  try {
    std::string file_text;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--help" || args[i] == "-h") {
        out << usage();
        return kExitOk;
      }
      if (args[i] == "--config") {
        if (i + 1 >= args.size()) throw ValidationError("--config needs a file");
        file_text = read_file(args[++i]);
      } else if (args[i].starts_with("--config=")) {
        file_text = read_file(args[i].substr(9));
      } else {
        rest.push_back(args[i]);
      }
    }
    const RunConfig cfg = parse_config(file_text, rest);
    run(cfg, out);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << tag << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << tag << ": " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << tag << ": " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace hmaps
