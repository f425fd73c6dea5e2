#include "gcelab/cli.h"

#include <chrono>
#include <cmath>
#include <ostream>

#include "gcelab/canonical.h"
#include "gcelab/errors.h"
#include "gcelab/io.h"
#include "gcelab/verify.h"

namespace gcelab {

namespace {

using io::json;
namespace fs = std::filesystem;

struct Context {
  const RunConfig& cfg;
  std::ostream& log;
  fs::path out;
  json report;
};

json config_or_empty(const RunConfig& cfg) { return cfg.config_path ? io::read_json(*cfg.config_path) : json::object(); }

GridSpec grid_spec(const RunConfig& cfg, const json& j, GridSpec fallback) {
  GridSpec g = j.contains("grid") ? io::grid_from_json(j["grid"]) : fallback;
  if (cfg.grid) std::tie(g.n_r, g.n_theta) = *cfg.grid;
  return g;
}

double config_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw InvalidInput(std::string("expected a number for ") + key);
  return j[key].get<double>();
}

double tolerance(const RunConfig& cfg, const json& j, double fallback) {
  const double t = cfg.tol ? *cfg.tol : config_number(j, "tol", fallback);
  if (!(t > 0)) throw InvalidInput("tolerance must be positive");
  return t;
}

const json& require_H(const json& j) {
  if (!j.contains("H")) throw InvalidInput("config needs a weight 'H'");
  return j["H"];
}

int cmd_solve(Context& c) {
  if (!c.cfg.config_path) throw InvalidInput("solve needs --config");
  const json j = io::read_json(*c.cfg.config_path);
  auto pf = io::problem_from_json(j);
  if (c.cfg.grid) std::tie(pf.grid.n_r, pf.grid.n_theta) = *c.cfg.grid;
  if (c.cfg.tol) pf.tol = tolerance(c.cfg, j, pf.tol);
  const auto grid = make_grid(pf.grid);
  const auto pb = io::make_problem(pf, grid);
  const auto sol = solve_gce(pb, pf.tol, pf.max_iter);
  io::write_atomic(c.out / "u.csv", io::field_csv(sol.u));
  c.report["grid"] = io::to_json(pf.grid);
  c.report["tolerances"] = {{"tol", pf.tol}, {"max_iter", pf.max_iter}};
  c.report["converged"] = sol.converged;
  c.report["iterations"] = sol.iterations;
  c.report["pde_residual"] = sol.pde_residual;
  c.report["weak_residual"] = sol.weak_residual;
  c.report["residual_floor"] = sol.residual_floor;
  c.report["clamp_events"] = sol.clamp_events;
  if (!sol.converged) c.log << "solve: Newton did not converge\n";
  return sol.converged ? kExitOk : kExitNoConvergence;
}

int cmd_canonical(Context& c) {
  const json j = config_or_empty(c.cfg);
  const HoloFn H = io::holo_from_json(require_H(j));
  CanonicalOptions opts;
  opts.grid = grid_spec(c.cfg, j, opts.grid);
  const double rho = config_number(j, "rho", 0.8);
  const double n_max = config_number(j, "n_max", 8.0);
  const double tol = tolerance(c.cfg, j, 1e-3);
  const auto R = canonical_solution(H, rho, n_max, tol, opts);
  io::write_atomic(c.out / "u_infinity.csv", io::field_csv(R.u_infinity));
  io::write_atomic(c.out / "uncertainty.csv", io::field_csv(*R.u_infinity.grid(), R.uncertainty));
  c.report["grid"] = io::to_json(opts.grid);
  c.report["tolerances"] = {{"tol", tol}, {"solve_tol", opts.solve_tol}, {"max_iter", opts.max_iter}};
  c.report["rho"] = rho;
  c.report["n_max"] = n_max;
  json levels = json::array();
  for (std::size_t k = 0; k < R.solutions.size(); ++k) {
    const auto& s = R.solutions[k];
    levels.push_back({{"n", R.n_values[k]},
                      {"converged", s.converged},
                      {"iterations", s.iterations},
                      {"pde_residual", s.pde_residual},
                      {"weak_residual", s.weak_residual}});
  }
  c.report["levels"] = levels;
  c.report["last_change"] = R.last_change;
  c.report["converged_on_compact"] = R.converged_on_compact;
  c.report["monotone"] = R.monotone;
  c.report["complete"] = R.complete;
  if (R.liouville) {
    const auto& L = *R.liouville;
    json profile = json::array();
    for (const auto& [mn, mean] : L.inner_profile) profile.push_back({mn, mean});
    c.report["liouville"] = {{"rho", L.rho},
                             {"cr_residual", L.cr_residual},
                             {"validation", L.validation},
                             {"ray_consistency", L.ray_consistency},
                             {"inner_profile", profile}};
  }
  json def = json::array();
  for (const auto& [r, d] : R.deficiency_profile) def.push_back({r, d});
  c.report["deficiency_profile"] = def;
  if (!R.complete) c.log << "canonical: a ladder solve did not converge; partial result\n";
  return R.complete ? kExitOk : kExitNoConvergence;
}

json assignment_table(const HeinsResult& r) {
  json t = json::array();
  for (std::size_t k = 0; k < r.targets.size(); ++k)
    t.push_back({{"target", io::to_json(r.targets[k])},
                 {"recovered", io::to_json(r.recovered[k])},
                 {"distance", r.distances[k]}});
  return t;
}

int cmd_heins(Context& c) {
  const json j = config_or_empty(c.cfg);
  std::vector<cx> C;
  if (c.cfg.critical) {
    C = io::parse_complex_list(*c.cfg.critical);
  } else if (j.contains("critical")) {
    if (!j["critical"].is_array()) throw InvalidInput("critical must be an array");
    for (const auto& z : j["critical"]) C.push_back(io::complex_from_json(z));
  } else {
    throw InvalidInput("heins needs --critical or a config with 'critical'");
  }
  const double tol = tolerance(c.cfg, j, 1e-6);
  const auto r = heins_solve(C, tol);
  io::write_atomic(c.out / "blaschke.json", io::to_json(r.product).dump(2) + "\n");
  c.report["grid"] = nullptr;
  c.report["tolerances"] = {{"tol", tol}};
  c.report["blaschke"] = io::to_json(r.product);
  c.report["assignment"] = assignment_table(r);
  c.report["assignment_residual"] = r.assignment_residual;
  c.report["steps"] = r.steps;
  return kExitOk;
}

int cmd_maximal(Context& c) {
  const json j = config_or_empty(c.cfg);
  const HoloFn H = io::holo_from_json(require_H(j));
  const GridSpec spec = grid_spec(c.cfg, j, {64, 128, 3.0});
  const double rho = config_number(j, "rho", 0.9);
  const auto mx = maximal_solution(H, make_grid(spec));
  io::write_atomic(c.out / "u_max.csv", io::field_csv(mx.u));
  io::write_atomic(c.out / "blaschke.json", io::to_json(mx.F).dump(2) + "\n");
  c.report["grid"] = io::to_json(spec);
  c.report["tolerances"] = {{"heins_tol", 1e-6}};
  c.report["blaschke"] = io::to_json(mx.F);
  c.report["rho"] = rho;
  c.report["interior_residual"] = interior_residual(mx.u, H, rho);
  return kExitOk;
}

int cmd_lp(Context& c) {
  const json j = config_or_empty(c.cfg);
  const HoloFn f = io::holo_from_json(require_H(j));
  const GridSpec spec = grid_spec(c.cfg, j, {128, 256, 2.0});
  const double tol = tolerance(c.cfg, j, 1e-3);
  const auto lp = littlewood_paley(f, *make_grid(spec));
  const double rel = lp.lhs > 0 ? std::abs(lp.lhs - lp.rhs) / lp.lhs : std::abs(lp.rhs);
  c.report["grid"] = io::to_json(spec);
  c.report["tolerances"] = {{"tol", tol}};
  c.report["lhs"] = lp.lhs;
  c.report["rhs"] = lp.rhs;
  c.report["relative_error"] = rel;
  c.report["within_tol"] = rel <= tol;
  return rel <= tol ? kExitOk : kExitInconsistent;
}

int cmd_verify(Context& c) {
  const auto results = run_verify(c.cfg.suite, c.cfg.seed);
  json table = json::array();
  bool ok = true;
  for (const auto& r : results) {
    json row = {{"suite", r.suite},      {"name", r.name},         {"passed", r.passed},
                {"measure", r.measure},  {"threshold", r.threshold}, {"comparison", r.at_least ? ">=" : "<="},
                {"seed", r.seed}};
    if (!r.error.empty()) row["error"] = r.error;
    table.push_back(row);
    ok = ok && r.passed;
    c.log << (r.passed ? "PASS " : "FAIL ") << r.suite << "/" << r.name << "  " << r.measure
          << (r.at_least ? " >= " : " <= ") << r.threshold;
    if (!r.error.empty()) c.log << "  (" << r.error << ")";
    c.log << "\n";
  }
  c.report["grid"] = nullptr;
  c.report["tolerances"] = nullptr;
  c.report["suite"] = c.cfg.suite;
  c.report["properties"] = table;
  c.report["passed"] = ok;
  return ok ? kExitOk : kExitInconsistent;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  Context c{cfg, log, cfg.out_dir, json::object()};
  c.report["command"] = cfg.command;
  c.report["seed"] = cfg.seed;
  int code = kExitOk;
  try {
    fs::create_directories(c.out);
    if (cfg.command == "solve") code = cmd_solve(c);
    else if (cfg.command == "canonical") code = cmd_canonical(c);
    else if (cfg.command == "heins") code = cmd_heins(c);
    else if (cfg.command == "maximal") code = cmd_maximal(c);
    else if (cfg.command == "lp") code = cmd_lp(c);
    else if (cfg.command == "verify") code = cmd_verify(c);
    else throw InvalidInput("unknown command '" + cfg.command + "'");
  } catch (const InvalidInput& e) {
    log << "invalid input: " << e.what() << "\n";
    code = kExitInvalid;
  } catch (const ConvergenceError& e) {
    log << "no convergence: " << e.what() << "\n";
    code = kExitNoConvergence;
  } catch (const InconsistencyError& e) {
    log << "inconsistency: " << e.what() << "\n";
    code = kExitInconsistent;
  } catch (const fs::filesystem_error& e) {
    log << "invalid input: " << e.what() << "\n";
    code = kExitInvalid;
  }
  c.report["exit_code"] = code;
  c.report["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    io::write_atomic(c.out / "report.json", c.report.dump(2) + "\n");
  } catch (const std::exception& e) {
    log << "cannot write report: " << e.what() << "\n";
    if (code == kExitOk) code = kExitInvalid;
  }
  return code;
}

}  // namespace gcelab
