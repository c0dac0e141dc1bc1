#include "cmk_cli/cli.hpp"

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "cmk/config.hpp"
#include "cmk/continuation.hpp"
#include "cmk/diagnostics.hpp"
#include "cmk/error.hpp"
#include "cmk/geometry.hpp"
#include "cmk/grid_io.hpp"
#include "cmk/parallel.hpp"
#include "report.hpp"

namespace cmk::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string config;
  std::string out_dir;
  std::string solution;
  std::string report;
  std::string out_file;
  std::string h_out;
  bool obj = false;
};

RunConfig load(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (o.obj) cfg.out_obj = true;
  return cfg;
}

std::string in_dir(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

// Diagnostics plus the inequality check against <x, e_last>^2.
DiagnosticsReport diagnose(const ProblemSpec& spec, const GridFunction& h) {
  DiagnosticsReport d = run_diagnostics(spec, h);
  if (admissibility(hessian_field(h), spec.k).admissible()) {
    const std::size_t last = static_cast<std::size_t>(spec.n);
    const GridFunction test = GridFunction::sample(spec.grid(), [last](const Vec3& x) { return x[last] * x[last]; });
    d.af_check = af_inequality_check(h, spec.k, test);
  }
  return d;
}

json solve_record(const ProblemSpec& spec, const ContinuationResult& cr) {
  std::vector<std::string> warnings = spec.warnings();
  warnings.insert(warnings.end(), cr.warnings.begin(), cr.warnings.end());
  json j = {{"parameters", parameters_json(spec)},
            {"success", cr.success},
            {"t_reached", cr.t_reached},
            {"continuation_steps", cr.trace.steps.size()},
            {"wall_seconds", cr.trace.wall_seconds},
            {"warnings", warnings}};
  if (!cr.failure.empty()) j["failure"] = cr.failure;
  j["residual"] = to_json(residual(spec, cr.h, 1.0));
  j["diagnostics"] = to_json(diagnose(spec, cr.h));
  return j;
}

int run_solve(const Options& o) {
  const RunConfig cfg = load(o);
  const ProblemSpec spec = make_problem(cfg);
  const ContinuationResult cr = continue_path(spec);
  write_grid_function_csv(in_dir(cfg, "solution.csv"), cr.h);
  write_trace_jsonl(in_dir(cfg, "trace.jsonl"), cr.trace);
  json rep = solve_record(spec, cr);
  if (cfg.out_obj) {
    const BodyMesh mesh = reconstruct_body(cr.h);
    if (!mesh.warning.empty()) rep["warnings"].push_back(mesh.warning);
    if (spec.n == 2) {
      write_obj(in_dir(cfg, "body.obj"), mesh);
    } else {
      write_polyline_csv(in_dir(cfg, "body.csv"), mesh);
    }
  }
  write_json(in_dir(cfg, "report.json"), rep);
  std::cout << (cr.success ? "converged" : "failed") << " t=" << cr.t_reached << " steps=" << cr.trace.steps.size()
            << " residual=" << rep["residual"]["linf"].get<double>() << '\n';
  if (!cr.success) std::cerr << "cmk: " << cr.failure << '\n';
  return cr.success ? kOk : kSolverFailure;
}

int run_verify(const Options& o) {
  const RunConfig cfg = load(o);
  const ProblemSpec spec = make_problem(cfg);
  const GridFunction h = read_grid_function_csv(o.solution, spec.grid());
  const ResidualReport res = residual(spec, h, 1.0);
  json rep = {{"parameters", parameters_json(spec)},
              {"residual", to_json(res)},
              {"diagnostics", to_json(diagnose(spec, h))},
              {"passed", res.linf <= spec.tol_newton}};
  if (o.report.empty()) {
    std::cout << rep.dump(2) << '\n';
  } else {
    write_json(o.report, rep);
  }
  return res.linf <= spec.tol_newton ? kOk : kSolverFailure;
}

int run_manufacture(const Options& o) {
  const RunConfig cfg = load(o);
  GridResolution res = cfg.grid;
  res.n = cfg.n;
  GridPtr grid;
  GridFunction h = [&] {
    try {
      grid = build_grid(res);
      return make_field(cfg.h, grid, cfg.k, cfg.p, false);
    } catch (const IoError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(cfg.source + ": " + e.what(), 0);
    }
  }();
  h = even_project(h);
  const GridFunction f = manufacture(h, cfg.k, cfg.p, cfg.q);
  const std::string out = o.out_file.empty() ? in_dir(cfg, "f.csv") : o.out_file;
  write_grid_function_csv(out, f);
  if (!o.h_out.empty()) write_grid_function_csv(o.h_out, h);
  std::cout << "wrote " << out << '\n';
  return kOk;
}

int run_spectrum(const Options& o) {
  const RunConfig cfg = load(o);
  const ProblemSpec spec = make_problem(cfg);
  const Spectrum s = l0_spectrum(spec);
  const std::string out = o.out_file.empty() ? in_dir(cfg, "spectrum.csv") : o.out_file;
  std::ofstream os(out);
  if (!os) throw IoError("cannot open " + out + " for writing");
  os << "index,eigenvalue\n";
  int positive = 0;
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    os << i << ',' << format_double(s.eigenvalues[i]) << '\n';
    if (s.eigenvalues[i] > 0.0) ++positive;
  }
  const double predicted = l0_analytic_eigenvalue(spec.n, spec.k, spec.p, spec.q, 0);
  const json summary = {{"positive_count", positive},
                        {"leading", s.eigenvalues.front()},
                        {"predicted_leading", predicted},
                        {"max_imag", s.max_imag}};
  std::cout << summary.dump() << '\n';
  return kOk;
}

json isotropic_json(const IsotropicReport& r) {
  json j = {{"converged", r.converged},
            {"r_star", r.r_star},
            {"sphere_radius_error", r.sphere_radius_error},
            {"R", r.h_final.max()},
            {"r", r.h_final.min()},
            {"window", {{"holds", r.window.holds}, {"q_bound", r.window.q_bound}}}};
  if (!r.window.note.empty()) j["window"]["note"] = r.window.note;
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

int run_isotropic(const Options& o) {
  const RunConfig cfg = load(o);
  const ProblemSpec spec = make_problem(cfg);
  bool all = true;
  json runs = json::array();
  const IsotropicReport base = isotropic_experiment(spec);
  all = all && base.converged;
  json first = isotropic_json(base);
  first["kind"] = "continuation";
  runs.push_back(first);
  for (int i = 0; i < cfg.isotropic_restarts; ++i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const IsotropicReport r = isotropic_restart(spec, seed, cfg.isotropic_amplitude);
    all = all && r.converged;
    json j = isotropic_json(r);
    j["kind"] = "restart";
    j["seed"] = seed;
    runs.push_back(j);
  }
  const json rep = {{"parameters", parameters_json(spec)}, {"runs", runs}, {"warnings", spec.warnings()}};
  write_json(in_dir(cfg, "isotropic.json"), rep);
  std::cout << (all ? "all runs converged" : "some runs failed") << " r*=" << base.r_star
            << " error=" << base.sphere_radius_error << '\n';
  return all ? kOk : kSolverFailure;
}

int run_sweep(const Options& o) {
  const RunConfig cfg = load(o);
  const std::vector<double> ps = cfg.sweep_p.empty() ? std::vector<double>{cfg.p} : cfg.sweep_p;
  const std::vector<double> qs = cfg.sweep_q.empty() ? std::vector<double>{cfg.q} : cfg.sweep_q;
  std::ofstream os(in_dir(cfg, "sweep.jsonl"));
  if (!os) throw IoError("cannot open sweep output");
  int failures = 0;
  for (double p : ps) {
    for (double q : qs) {
      const ProblemSpec spec = make_problem(cfg, p, q);
      const ContinuationResult cr = continue_path(spec);
      json j = solve_record(spec, cr);
      if (spec.n >= 2) {
        const IsotropicWindow w = isotropic_window(spec.n, spec.k, p, q);
        j["isotropic_window"] = {{"holds", w.holds}, {"q_bound", w.q_bound}};
      }
      os << j.dump() << '\n';
      if (!cr.success) ++failures;
    }
  }
  std::cout << ps.size() * qs.size() << " points, " << failures << " failed\n";
  return kOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Solver and verification toolkit for L_p dual Christoffel-Minkowski problems on S^1 and S^2"};
  app.require_subcommand(1);
  Options o;

  auto* solve = app.add_subcommand("solve", "Continue from h = 1 to the target data");
  solve->add_option("-c,--config", o.config, "Run configuration")->required()->check(CLI::ExistingFile);
  solve->add_option("-o,--out", o.out_dir, "Output directory (overrides out.dir)");
  solve->add_flag("--obj", o.obj, "Also export the reconstructed body");

  auto* verify = app.add_subcommand("verify", "Residual and diagnostics of a stored solution");
  verify->add_option("-c,--config", o.config, "Run configuration")->required()->check(CLI::ExistingFile);
  verify->add_option("-s,--solution", o.solution, "Solution CSV")->required()->check(CLI::ExistingFile);
  verify->add_option("-r,--report", o.report, "Write the report here instead of stdout");

  auto* manuf = app.add_subcommand("manufacture", "Data f for which the configured h is an exact solution");
  manuf->add_option("-c,--config", o.config, "Run configuration")->required()->check(CLI::ExistingFile);
  manuf->add_option("-o,--out", o.out_file, "f CSV path");
  manuf->add_option("--h-out", o.h_out, "Also write the sampled h");

  auto* spectrum = app.add_subcommand("spectrum", "Even-subspace spectrum of the linearization at h = 1");
  spectrum->add_option("-c,--config", o.config, "Run configuration")->required()->check(CLI::ExistingFile);
  spectrum->add_option("-o,--out", o.out_file, "Eigenvalue CSV path");

  auto* iso = app.add_subcommand("isotropic", "f = 1 runs compared with the round solution");
  iso->add_option("-c,--config", o.config, "Run configuration")->required()->check(CLI::ExistingFile);
  iso->add_option("-o,--out", o.out_dir, "Output directory (overrides out.dir)");

  auto* sweep = app.add_subcommand("sweep", "Solve over the sweep.p x sweep.q grid");
  sweep->add_option("-c,--config", o.config, "Run configuration")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--out", o.out_dir, "Output directory (overrides out.dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    configure_threads_from_env();
    if (*solve) return run_solve(o);
    if (*verify) return run_verify(o);
    if (*manuf) return run_manufacture(o);
    if (*spectrum) return run_spectrum(o);
    if (*iso) return run_isotropic(o);
    if (*sweep) return run_sweep(o);
  } catch (const ConfigError& e) {
    std::cerr << "cmk: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "cmk: input error: " << e.what() << '\n';
    return kConfigError;
  } catch (const PreconditionError& e) {
    std::cerr << "cmk: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "cmk: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "cmk: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kConfigError;
}

}  // namespace cmk::cli
