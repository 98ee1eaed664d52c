#include "symplectic/cli.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "symplectic/config.hpp"
#include "symplectic/diagnostics.hpp"
#include "symplectic/errors.hpp"
#include "symplectic/experiments.hpp"
#include "symplectic/history.hpp"
#include "symplectic/io.hpp"
#include "symplectic/verify.hpp"

namespace symplectic {

namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
};

ExperimentConfig load_config(const CommonOptions& common) {
  ExperimentConfig cfg;
  if (!common.config.empty()) cfg = ExperimentConfig::load(common.config);
  if (common.seed_given) cfg.seed = common.seed;
  if (!common.out.empty()) cfg.output.dir = common.out;
  cfg.validate();
  return cfg;
}

NonlinearOptions nonlinear_options(const ExperimentConfig& cfg) {
  NonlinearOptions opts;
  opts.solver = cfg.integrator.solver;
  opts.tol = cfg.integrator.tol;
  opts.max_iter = cfg.integrator.max_iter;
  opts.stride = cfg.output.stride;
  return opts;
}

std::string model_name(const HamiltonianSystem& system) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuadraticHamiltonian>) return "quadratic";
        if constexpr (std::is_same_v<T, CubicHamiltonian>) return "cubic";
        if constexpr (std::is_same_v<T, SeparableForceSystem>) return s.name;
      },
      system);
}

// ---------------------------------------------------------------- integrate

int cmd_integrate(const CommonOptions& common, std::ostream& out) {
  const auto cfg = load_config(common);
  const auto system = build_model(cfg.model);
  const Vec x0 = build_initial_state(cfg, system);
  const auto [tau, steps] = cfg.resolved_stepping();
  const Index stride = cfg.output.stride;

  KeyValueReport report;
  report.add("model", cfg.model.kind);
  report.add("system", model_name(system));
  report.add("dim", static_cast<long long>(x0.size()));
  report.add("method", cfg.integrator.method);
  report.add("tau", tau);
  report.add("steps", static_cast<long long>(steps));

  Trajectory traj;
  const std::string& method = cfg.integrator.method;
  if (method == "rkg") {
    const auto tab = gauss_tableau(cfg.integrator.p);
    report.add("p", static_cast<long long>(cfg.integrator.p));
    if (const auto* quad = std::get_if<QuadraticHamiltonian>(&system)) {
      const Mat k = quad->generator();
      const auto spec = spectral_report(k);
      const auto step = build_step_operator(tab, k, tau);
      traj = integrate_linear(step, x0, steps, stride);
      report.add("kappa_v", spec.kappa_v);
      report.add("stable", spec.stable);
      report.add("tau_norm_k", step.tau_norm);
      report.add("kappa_g", step.kappa_g);
      report.add("kappa_g_exact", step.kappa_g_exact);
      report.add("kappa_g_bound", step.kappa_g_bound);
      report.add("symplectic_defect", symplectic_defect(step.r));
    } else {
      if (const auto* cubic = std::get_if<CubicHamiltonian>(&system)) {
        const auto spec = spectral_report(Mat(cubic->field().f1));
        report.add("kappa_v", spec.kappa_v);
      }
      traj = integrate_nonlinear(tab, system, x0, tau, steps, nonlinear_options(cfg));
    }
  } else if (method == "rk4") {
    traj = integrate_rk4(system, x0, tau, steps, stride);
  } else {
    traj = integrate_verlet(system, x0, tau, steps, stride);
  }
  const auto drift = energy_drift(system, traj);
  report.add("energy_initial", drift.energy.front());
  report.add("max_relative_drift", drift.max_drift);
  report.add("rows", static_cast<long long>(traj.size()));

  const fs::path dir = cfg.output.dir;
  write_file_atomic(dir / "trajectory.csv", trajectory_csv(traj));
  write_file_atomic(dir / "report.txt", report.str());
  out << report.str();
  return kExitOk;
}

// ---------------------------------------------------------------- bench

int cmd_bench(const CommonOptions& common, const std::vector<std::string>& methods,
              std::ostream& out) {
  const auto cfg = load_config(common);
  const auto system = build_model(cfg.model);
  const Vec x0 = build_initial_state(cfg, system);
  const auto [tau, steps] = cfg.resolved_stepping();
  BenchConfig bench;
  bench.tau = tau;
  bench.steps = steps;
  bench.stride = cfg.output.stride;
  bench.p = cfg.integrator.p;
  bench.solver = cfg.integrator.solver == StageSolver::automatic
                     ? StageSolver::fixed_point
                     : cfg.integrator.solver;
  bench.tol = cfg.integrator.tol;
  bench.max_iter = cfg.integrator.max_iter;
  if (!methods.empty()) bench.methods = methods;
  const auto results = run_energy_bench(system, x0, bench);

  const fs::path dir = cfg.output.dir;
  std::string summary = "method,max_drift,slope,intercept,residual_sigma,trend_within_3sigma\n";
  for (const auto& r : results) {
    write_file_atomic(dir / ("drift_" + r.method + ".csv"), drift_csv(r.drift));
    summary += r.method + ',' + format_double(r.drift.max_drift) + ',' +
               format_double(r.drift.trend.slope) + ',' +
               format_double(r.drift.trend.intercept) + ',' +
               format_double(r.drift.trend.residual_sigma) + ',' +
               (r.drift.trend_within(3.0) ? "true" : "false") + '\n';
    out << r.method << ": max drift " << format_double(r.drift.max_drift)
        << ", slope " << format_double(r.drift.trend.slope) << ", "
        << r.seconds << " s\n";
  }
  write_file_atomic(dir / "summary.csv", summary);
  return kExitOk;
}

// ---------------------------------------------------------------- carleman

int cmd_carleman(const CommonOptions& common, std::ostream& out) {
  const auto cfg = load_config(common);
  const auto system = build_model(cfg.model);
  const auto* cubic = std::get_if<CubicHamiltonian>(&system);
  if (!cubic) {
    throw UnsupportedSystemError("carleman needs a cubic model (fpu or matrix with "
                                 "model.c_csv); got " + model_name(system));
  }
  const PolynomialField& field = cubic->field();
  const Vec x0 = build_initial_state(cfg, system);
  if (!cfg.integrator.tau) {
    throw ConfigError("carleman needs integrator.tau", "integrator.tau");
  }
  const double tau = *cfg.integrator.tau;
  double horizon = 0.0;
  if (cfg.carleman.horizon) {
    horizon = *cfg.carleman.horizon;
  } else {
    const auto [t, s] = cfg.resolved_stepping();
    horizon = t * static_cast<double>(s);
  }
  const Index steps = static_cast<Index>(std::llround(horizon / tau));
  if (steps < 1 || std::abs(steps * tau - horizon) > 1e-9 * std::max(1.0, horizon)) {
    throw ConfigError("carleman.T is not a multiple of integrator.tau", "carleman.T");
  }

  const Mat f1 = Mat(field.f1);
  const double mu = estimate_mu(field, x0, horizon);
  KeyValueReport report;
  int levels = 0;
  if (cfg.carleman.n_levels) {
    levels = *cfg.carleman.n_levels;
    report.add("n_levels_source", std::string("config"));
  } else {
    if (!cfg.carleman.eps) {
      throw ConfigError("carleman.N = auto requires carleman.eps", "carleman.eps");
    }
    const double eps = *cfg.carleman.eps;
    // throws ResonanceError naming the resonant eigenvalue sum
    const double rr = convergence_radius(f1, field.f2, mu, kTruncationCeiling);
    if (!(rr < 1.0)) {
      throw TruncationInfeasibleError(
          "R_r = " + format_double(rr) + " >= 1: the truncation bound does not "
          "decay in N", std::numeric_limits<double>::infinity());
    }
    const auto choice = choose_truncation(horizon, eps, rr);
    levels = choice.n_levels;
    report.add("n_levels_source", std::string("auto"));
    report.add("eps", eps);
    report.add("truncation_bound", choice.bound);
    report.add("lambert_estimate", choice.lambert_estimate);
    report.add("lambert_valid", choice.lambert_valid);
  }

  auto csys = build_carleman(field, levels);
  diagnose_embedding(csys, mu);
  const auto res = resonance_margin(f1, levels + 2);
  const auto tab = gauss_tableau(cfg.integrator.p);
  const auto traj = integrate_carleman(csys, x0, tab, tau, steps, cfg.carleman.via,
                                       cfg.output.stride);
  NonlinearOptions ref_opts = nonlinear_options(cfg);
  ref_opts.solver = StageSolver::newton;
  ref_opts.tol = 1e-14;
  ref_opts.stride = steps * 10;
  const Vec reference =
      integrate_nonlinear(tab, field, x0, tau / 10.0, steps * 10, ref_opts).final_state();

  report.add("n", static_cast<long long>(csys.n));
  report.add("n_levels", static_cast<long long>(csys.N));
  report.add("total_dim", static_cast<long long>(csys.total_dim()));
  report.add("nnz", static_cast<long long>(csys.a.nonZeros()));
  report.add("mu", csys.mu);
  report.add("kappa1_v", csys.kappa1_v);
  report.add("norm1_f2", norm1(csys.f2));
  report.add("delta", csys.delta);
  report.add("resonant", res.resonant);
  report.add("resonance_witness", res.describe());
  report.add("rr", csys.rr);
  report.add("T", horizon);
  report.add("tau", tau);
  report.add("steps", static_cast<long long>(steps));
  report.add("p", static_cast<long long>(cfg.integrator.p));
  report.add("route", to_string(cfg.carleman.via));
  report.add("error_vs_reference", (traj.final_state() - reference).norm());
  report.add("symplectic_residual",
             symplectic_residual(csys, x0, tab, tau, steps));

  const fs::path dir = cfg.output.dir;
  write_file_atomic(dir / "carleman_trajectory.csv", trajectory_csv(traj));
  write_file_atomic(dir / "carleman_report.txt", report.str());
  out << report.str();
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const CommonOptions& common, const std::string& suite,
               bool corrupt, std::ostream& out) {
  VerifyOptions opts;
  opts.seed = common.seed;
  opts.threads = common.threads;
  opts.corrupt_tableau = corrupt;
  const auto checks = run_verify(suite, opts);
  const std::string text = format_checks(checks);
  if (!common.out.empty()) {
    write_file_atomic(fs::path(common.out) / ("verify_" + suite + ".csv"), text);
  }
  out << text;
  return all_passed(checks) ? kExitOk : kExitVerificationFailure;
}

// ---------------------------------------------------------------- dump-matrix

int cmd_dump(const CommonOptions& common, const std::string& what, Index padding,
             std::ostream& out) {
  const auto cfg = load_config(common);
  const auto system = build_model(cfg.model);
  Mat k;
  if (const auto* quad = std::get_if<QuadraticHamiltonian>(&system)) {
    k = quad->generator();
  } else if (const auto* cubic = std::get_if<CubicHamiltonian>(&system)) {
    k = Mat(cubic->field().f1);
  } else if (what != "carleman") {
    throw UnsupportedSystemError("dump-matrix needs a quadratic or cubic model");
  }
  SpMat m;
  if (what == "generator") {
    m = to_sparse(k);
  } else if (what == "step" || what == "history") {
    if (!cfg.integrator.tau) throw ConfigError("needs integrator.tau", "integrator.tau");
    const auto step = build_step_operator(gauss_tableau(cfg.integrator.p), k,
                                          *cfg.integrator.tau, StepOptions{false});
    if (what == "step") {
      m = step.sparse();
    } else {
      const Vec x0 = build_initial_state(cfg, system);
      m = assemble(step, x0, cfg.resolved_stepping().second, padding).matrix();
    }
  } else if (what == "carleman") {
    const auto* cubic = std::get_if<CubicHamiltonian>(&system);
    if (!cubic) throw UnsupportedSystemError("dump-matrix carleman needs a cubic model");
    if (!cfg.carleman.n_levels) throw ConfigError("needs carleman.N", "carleman.N");
    m = build_carleman(cubic->field(), *cfg.carleman.n_levels).a;
  } else {
    throw ParameterDomainError("unknown matrix '" + what +
                               "' (generator | step | history | carleman)");
  }
  const fs::path path = fs::path(cfg.output.dir) / (what + ".csv");
  write_file_atomic(path, triplet_csv(m));
  out << what << ": " << m.rows() << " x " << m.cols() << ", " << m.nonZeros()
      << " nonzeros -> " << path.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Structure-preserving integrators for Hamiltonian systems"};
  app.require_subcommand(1);
  CommonOptions common;
  app.add_option("--config", common.config, "experiment config file");
  app.add_option("--out", common.out, "output directory (overrides output.dir)");
  auto* seed_opt = app.add_option("--seed", common.seed, "seed (overrides config)");
  app.add_option("--threads", common.threads, "worker threads")
      ->check(CLI::PositiveNumber);

  auto* integrate = app.add_subcommand("integrate", "integrate one trajectory");
  auto* bench = app.add_subcommand("bench-energy", "energy drift for rkg, rk4, verlet");
  std::vector<std::string> methods;
  bench->add_option("--methods", methods, "subset of rkg rk4 verlet")->delimiter(',');
  auto* carleman = app.add_subcommand("carleman", "Carleman embedding diagnostics");
  auto* verify = app.add_subcommand("verify", "property suites");
  std::string suite = "all";
  bool corrupt = false;
  verify->add_option("--suite", suite, "all | rkg | history | carleman | bounds");
  verify->add_flag("--corrupt-tableau", corrupt, "fault hook: perturb a(0,0)");
  auto* dump = app.add_subcommand("dump-matrix", "write a matrix as i,j,value CSV");
  std::string what = "generator";
  Index padding = 0;
  dump->add_option("--what", what, "generator | step | history | carleman");
  dump->add_option("--padding", padding, "history padding r")
      ->check(CLI::NonNegativeNumber);

  // common flags are accepted after the subcommand name too
  for (auto* sub : {integrate, bench, carleman, verify, dump}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  common.seed_given = seed_opt->count() > 0;

  try {
    if (*integrate) return cmd_integrate(common, out);
    if (*bench) return cmd_bench(common, methods, out);
    if (*carleman) return cmd_carleman(common, out);
    if (*verify) return cmd_verify(common, suite, corrupt, out);
    return cmd_dump(common, what, padding, out);
  } catch (const ConfigError& e) {
    err << "config error";
    if (!e.field().empty()) err << " [" << e.field() << "]";
    err << ": " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ParameterDomainError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const ShapeError& e) {
    err << "shape error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const StabilityDomainError& e) {
    err << "stability error: " << e.what() << " (tau ||K|| = " << e.tau_norm()
        << ")\n";
    return kExitConfigError;
  } catch (const ResonanceError& e) {
    err << "resonance error: " << e.what() << '\n';
    return kExitCapabilityError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCapabilityError;
  }
}

}  // namespace symplectic
