#include "symplectic/experiments.hpp"

#include <chrono>
#include <cmath>

#include "symplectic/errors.hpp"

namespace symplectic {

Mat random_spd(Index n, CounterRng& rng, double shift) {
  Mat b(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) b(i, j) = rng.normal();
  }
  return b.transpose() * b / static_cast<double>(n) +
         shift * Mat::Identity(n, n);
}

Mat random_stable_generator(Index d, CounterRng& rng) {
  const Mat q = 0.5 * random_spd(2 * d, rng);
  return canonical_j(d) * (2.0 * q);
}

Mat random_well_conditioned(Index n, CounterRng& rng, double scale) {
  Mat g(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  }
  return Mat::Identity(n, n) + scale * g / std::sqrt(static_cast<double>(n));
}

Vec thermal_state(const Vec& positions, const Vec& masses, double temperature,
                  std::uint64_t seed) {
  if (positions.size() != masses.size()) {
    throw ShapeError("thermal_state: positions and masses differ in length");
  }
  if (!(temperature >= 0.0)) {
    throw ParameterDomainError("thermal_state: temperature must be >= 0");
  }
  const Index d = positions.size();
  CounterRng rng(seed, 0x7468);
  Vec p(d);
  for (Index i = 0; i < d; ++i) {
    p[i] = rng.normal() * std::sqrt(masses[i] * temperature);
  }
  if (d > 1) p.array() -= p.mean();
  Vec x(2 * d);
  x << positions, p;
  return x;
}

Vec fpu_thermal_state(Index particles, double mass, double temperature,
                      std::uint64_t seed) {
  return thermal_state(Vec::Zero(particles), Vec::Constant(particles, mass),
                       temperature, seed);
}

Vec lj_thermal_state(const LennardJonesParams& params, double temperature,
                     std::uint64_t seed) {
  const Vec q = lj_lattice_positions(params);
  Vec m = Vec::Constant(q.size(), params.mass);
  const Index dim = params.spatial_dim;
  CounterRng rng(seed, 0x6c6a);
  Vec p(q.size());
  for (Index i = 0; i < q.size(); ++i) {
    p[i] = rng.normal() * std::sqrt(params.mass * temperature);
  }
  // zero total momentum per Cartesian component
  for (Index c = 0; c < dim; ++c) {
    double mean = 0.0;
    for (Index a = 0; a < params.particles; ++a) mean += p[a * dim + c];
    mean /= static_cast<double>(params.particles);
    for (Index a = 0; a < params.particles; ++a) p[a * dim + c] -= mean;
  }
  Vec x(2 * q.size());
  x << q, p;
  return x;
}

Vec carleman_default_state(Index n) {
  const double pattern[4] = {0.5, -0.3, 0.2, 0.1};
  Vec x(n);
  for (Index i = 0; i < n; ++i) x[i] = pattern[i % 4];
  return x / x.norm();
}

CarlemanStudy run_carleman_study(const CarlemanStudyConfig& cfg) {
  if (cfg.levels.empty()) throw ParameterDomainError("study needs levels");
  const CubicHamiltonian h = make_fpu_chain(cfg.particles, cfg.stiffness,
                                            cfg.alpha, cfg.mass, cfg.boundary);
  const PolynomialField& field = h.field();
  const Index n = h.dim();
  CarlemanStudy out;
  out.x0 = cfg.x0.size() ? cfg.x0 : carleman_default_state(n);
  if (out.x0.size() != n) throw ShapeError("study: x0 length mismatch");

  const Index steps = static_cast<Index>(std::llround(cfg.horizon / cfg.tau));
  if (steps < 1 || std::abs(steps * cfg.tau - cfg.horizon) > 1e-9 * cfg.horizon) {
    throw ParameterDomainError("study: T must be a multiple of tau");
  }
  const ButcherTableau tab = gauss_tableau(cfg.p);
  const Vec reference =
      integrate_nonlinear(tab, h, out.x0, cfg.tau / cfg.reference_factor,
                          steps * cfg.reference_factor,
                          NonlinearOptions{StageSolver::newton, 1e-14, 50,
                                           steps * cfg.reference_factor})
          .final_state();

  const Mat f1 = Mat(field.f1);
  const auto spec = spectral_report(f1);
  out.kappa1_v = spec.kappa1_v;
  out.norm1_f2 = norm1(field.f2);
  out.mu = estimate_mu(field, out.x0, cfg.horizon);
  const int n_max = *std::max_element(cfg.levels.begin(), cfg.levels.end());
  out.resonance = resonance_margin(f1, n_max + 2, ResonanceMode::full);
  out.resonance_noncancel =
      resonance_margin(f1, n_max + 2, ResonanceMode::non_cancelling);
  auto radius = [&](const ResonanceResult& r) {
    if (out.norm1_f2 == 0.0) return 0.0;
    if (r.resonant || !(r.delta > 0.0)) return std::numeric_limits<double>::infinity();
    return convergence_radius(out.mu, out.kappa1_v, out.norm1_f2, r.delta);
  };
  out.rr = radius(out.resonance);
  out.rr_noncancel = radius(out.resonance_noncancel);

  std::vector<double> ns;
  std::vector<double> logs;
  for (int level : cfg.levels) {
    const CarlemanSystem csys = build_carleman(field, level);
    CarlemanStudyRow row;
    row.n_levels = level;
    row.dim = csys.total_dim();
    row.norm_a = spectral_norm(csys.a);
    const StepOperator step = carleman_step_operator(csys, tab, cfg.tau);
    const auto traj = integrate_carleman(csys, step, out.x0, steps,
                                         CarlemanRoute::sequential, steps);
    row.error = (traj.final_state() - reference).norm();
    row.residual = symplectic_defect(
        carleman_w11(csys, step, out.x0, steps, JacobianMethod::exact));
    if (cfg.finite_difference_check) {
      row.residual_fd = symplectic_defect(carleman_w11(
          csys, step, out.x0, steps, JacobianMethod::finite_difference));
    }
    row.bound = std::isfinite(out.rr)
                    ? level * cfg.horizon * std::pow(out.rr, level - 1)
                    : std::numeric_limits<double>::infinity();
    out.rows.push_back(row);
    if (row.error > 0.0) {
      ns.push_back(level);
      logs.push_back(std::log(row.error));
    }
  }
  if (ns.size() >= 2) {
    out.fitted_ratio = std::exp(linear_fit(ns, logs).slope);
    for (const auto& row : out.rows) {
      const double model = row.n_levels * cfg.horizon *
                           std::pow(out.fitted_ratio, row.n_levels - 1);
      out.fitted_c = std::max(out.fitted_c, row.error / model);
    }
  }
  return out;
}

std::vector<BenchResult> run_energy_bench(const HamiltonianSystem& system,
                                          const Vec& x0,
                                          const BenchConfig& cfg) {
  if (cfg.steps <= 0) {
    throw ParameterDomainError("energy bench needs steps > 0 (empty series)");
  }
  std::vector<BenchResult> out;
  for (const auto& method : cfg.methods) {
    const auto start = std::chrono::steady_clock::now();
    Trajectory traj;
    if (method == "rkg") {
      NonlinearOptions opts;
      opts.solver = cfg.solver;
      opts.tol = cfg.tol;
      opts.max_iter = cfg.max_iter;
      opts.stride = cfg.stride;
      if (std::holds_alternative<QuadraticHamiltonian>(system)) {
        const Mat k = std::get<QuadraticHamiltonian>(system).generator();
        traj = integrate_linear(gauss_tableau(cfg.p), k, x0, cfg.tau, cfg.steps,
                                cfg.stride);
      } else {
        traj = integrate_nonlinear(gauss_tableau(cfg.p), system, x0, cfg.tau,
                                   cfg.steps, opts);
      }
    } else if (method == "rk4") {
      traj = integrate_rk4(system, x0, cfg.tau, cfg.steps, cfg.stride);
    } else if (method == "verlet") {
      traj = integrate_verlet(system, x0, cfg.tau, cfg.steps, cfg.stride);
    } else {
      throw ParameterDomainError("unknown bench method '" + method + "'");
    }
    BenchResult res;
    res.method = method;
    res.drift = energy_drift(system, traj);
    res.seconds = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace symplectic
