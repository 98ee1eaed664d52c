#include "symplectic/verify.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/MatrixFunctions>

#include "symplectic/diagnostics.hpp"
#include "symplectic/errors.hpp"
#include "symplectic/experiments.hpp"
#include "symplectic/history.hpp"
#include "symplectic/io.hpp"
#include "symplectic/models.hpp"

namespace symplectic {

namespace {

constexpr std::uint64_t kSymplecticStream = 0x1000;
constexpr std::uint64_t kHistoryStream = 0x2000;
constexpr std::uint64_t kConditionStream = 0x3000;
constexpr std::uint64_t kKappaGStream = 0x4000;
constexpr std::uint64_t kSimilarityStream = 0x5000;
constexpr std::uint64_t kToyStream = 0x6000;

CheckResult at_most(std::string name, double measured, double threshold) {
  return {std::move(name), measured <= threshold, measured, threshold};
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

Mat oscillator() { return canonical_j(1); }

ButcherTableau maybe_corrupt(ButcherTableau tab, bool corrupt) {
  if (corrupt) tab.a(0, 0) += 0.01;
  return tab;
}

// ------------------------------------------------------------------- suites

void rkg_suite(const VerifyOptions& opts, std::vector<CheckResult>& out) {
  {
    double node = 0.0;
    double weight = 0.0;
    double rows = 0.0;
    double radius = 0.0;
    for (int p = 1; p <= 16; ++p) {
      const auto tab = gauss_tableau(p);
      for (Index i = 0; i < p; ++i) {
        node = std::max(node, std::abs(shifted_legendre(p, tab.c[i])));
      }
      weight = std::max(weight, std::abs(tab.b.sum() - 1.0));
      rows = std::max(rows, (tab.a.rowwise().sum() - tab.c).cwiseAbs().maxCoeff());
      radius = std::max(radius, stage_spectral_radius(tab));
    }
    out.push_back(at_most("tableau.legendre_nodes", node, 1e-10));
    out.push_back(at_most("tableau.weight_sum", weight, 1e-13));
    out.push_back(at_most("tableau.row_sums", rows, 1e-13));
    out.push_back({"tableau.stage_radius", radius < 1.0, radius, 1.0});
  }
  {
    CounterRng rng(opts.seed, kSimilarityStream);
    const auto tab = gauss_tableau(2);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Complex z(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
      const Complex pade = (z * z + 6.0 * z + 12.0) / (z * z - 6.0 * z + 12.0);
      worst = std::max(worst, std::abs(stability_scalar(tab, z) - pade) /
                                  std::abs(pade));
    }
    out.push_back(at_most("stability.pade_p2", worst, 1e-12));
  }
  {
    const auto ens = symplectic_ensemble(50, opts.seed, opts.threads);
    out.push_back(at_most("step.symplectic", ens.max_defect, 1e-10));
    out.push_back(at_most("step.unit_modulus", ens.max_modulus_error, 1e-10));
  }
  {
    // composition of two near-symplectic maps stays near-symplectic
    CounterRng rng(opts.seed, kSymplecticStream + 999);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Mat k = random_stable_generator(2, rng);
      const double tau = 0.4 / spectral_norm(k);
      const auto r1 = build_step_operator(gauss_tableau(1 + i % 3), k, tau,
                                          StepOptions{false});
      const auto r2 = build_step_operator(gauss_tableau(1 + (i + 1) % 3), k,
                                          0.5 * tau, StepOptions{false});
      worst = std::max(worst, symplectic_defect(r1.r * r2.r));
    }
    out.push_back(at_most("step.composition", worst, 1e-10));
  }
  {
    const std::vector<double> taus{0.4, 0.2, 0.1, 0.05};
    double worst = 0.0;
    for (int p = 1; p <= 3; ++p) {
      const auto tab = maybe_corrupt(gauss_tableau(p), opts.corrupt_tableau);
      const double slope = oscillator_order(tab, taus, 20.0);
      worst = std::max(worst, std::abs(slope - 2.0 * p) / (2.0 * p));
    }
    out.push_back(at_most("step.order", worst, 0.1));
  }
  {
    CounterRng rng(opts.seed, kSimilarityStream + 1);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Index d = 1 + i % 3;
      const Mat k = random_stable_generator(d, rng);
      const Mat v = random_well_conditioned(2 * d, rng);
      const Mat vinv = v.inverse();
      const double tau = 0.4 / spectral_norm(k);
      const auto tab = gauss_tableau(1 + i % 3);
      const Mat direct =
          build_step_operator(tab, Mat(v * k * vinv), tau, StepOptions{false}).r;
      const Mat conj = v * build_step_operator(tab, k, tau, StepOptions{false}).r * vinv;
      worst = std::max(worst, (direct - conj).norm() / conj.norm());
    }
    out.push_back(at_most("step.similarity", worst, 1e-10));
  }
  {
    const auto chain = make_harmonic_chain(4, 1.0, 1.0, Boundary::fixed);
    const Vec x0 = carleman_default_state(chain.dim());
    const auto traj = integrate_linear(gauss_tableau(2), chain.generator(), x0,
                                       0.1, 1000, 10);
    const auto drift = energy_drift(HamiltonianSystem{chain}, traj);
    out.push_back(at_most("step.quadratic_invariant", drift.max_drift, 1e-10));
  }
  {
    const double t = choose_stage_count(10.0, 2.0, 1e-6);
    out.push_back({"stage_count.range", t >= 1 && t <= 16, t, 16});
  }
}

void history_suite(const VerifyOptions& opts, std::vector<CheckResult>& out) {
  const auto ens = history_ensemble(20, opts.seed, opts.threads);
  out.push_back(at_most("history.solve_equivalence", ens.max_final_error, 1e-10));
  out.push_back(at_most("history.lu_equivalence", ens.max_lu_final_error, 1e-10));
  out.push_back(at_most("history.residual", ens.max_residual, 1e-10));
  out.push_back(at_most("history.padded_tail", ens.max_tail_spread, 1e-12));
  out.push_back(at_most("history.nnz", static_cast<double>(ens.nnz_mismatch), 0));

  const auto scaling = condition_scaling({10, 20, 40, 80}, 6, opts.seed, opts.threads);
  out.push_back(at_most("history.kappa_slope", scaling.slope, 1.2));
  out.push_back(at_most("history.padded_kappa_slope", scaling.padded_slope, 1.2));
  out.push_back(at_most("history.envelope_c_spread",
                        scaling.c_max / scaling.c_median, 10.0));

  {
    CounterRng rng(opts.seed, kHistoryStream + 777);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
      const Mat k = random_stable_generator(1 + i % 2, rng);
      const double tau = 0.3 / spectral_norm(k);
      const auto step = build_step_operator(gauss_tableau(1 + i % 3), k, tau,
                                            StepOptions{false});
      const Vec x0 = Vec::Ones(k.rows());
      const auto sys = assemble(step, x0, 10 + 5 * i, (i % 2) * 7);
      const auto cond = condition_number(sys, ConditionMethod::exact, rng);
      worst = std::max(worst, (1.0 / cond.sigma_min) / nilpotent_series_bound(sys));
    }
    out.push_back(at_most("history.nilpotent_series", worst, 1.0 + 1e-9));
  }
}

void carleman_suite(const VerifyOptions& opts, std::vector<CheckResult>& out) {
  const CubicHamiltonian fpu = make_fpu_chain(2, 1.0, 0.05, 1.0, Boundary::fixed);
  const PolynomialField& field = fpu.field();
  const Index n = fpu.dim();
  {
    // block rows below N reproduce d/dt x^{(x)j} exactly
    CounterRng rng(opts.seed, kToyStream);
    const int levels = 4;
    const auto csys = build_carleman(field, levels);
    double worst = 0.0;
    for (int s = 0; s < 10; ++s) {
      Vec x(n);
      for (Index i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
      const Vec lhs = csys.a * lift(x, levels);
      const Vec rhs = lift_jacobian(x, levels) * field(x);
      const Index head = csys.offsets[levels - 1];
      worst = std::max(worst, (lhs - rhs).head(head).norm() /
                                  (1.0 + rhs.head(head).norm()));
    }
    out.push_back(at_most("carleman.block_consistency", worst, 1e-12));
  }
  {
    // F2 = 0: first block reproduces the linear integrator
    const auto chain = make_harmonic_chain(2, 1.0, 1.0, Boundary::fixed);
    const PolynomialField linear{to_sparse(chain.generator()),
                                 SpMat(chain.dim(), chain.dim() * chain.dim())};
    const auto csys = build_carleman(linear, 3);
    const Vec x0 = carleman_default_state(chain.dim());
    const auto tab = gauss_tableau(2);
    const Vec y = integrate_carleman(csys, x0, tab, 0.05, 200).final_state();
    const Vec x = integrate_linear(tab, chain.generator(), x0, 0.05, 200).final_state();
    out.push_back(at_most("carleman.linear_reduction",
                          (y - x).norm() / x.norm(), 1e-12));
  }
  {
    const auto csys = build_carleman(field, 3);
    const Vec x0 = carleman_default_state(n);
    const auto tab = gauss_tableau(2);
    const Vec a = integrate_carleman(csys, x0, tab, 0.05, 40,
                                     CarlemanRoute::sequential).final_state();
    const Vec b = integrate_carleman(csys, x0, tab, 0.05, 40,
                                     CarlemanRoute::history).final_state();
    out.push_back(at_most("carleman.route_agreement",
                          (a - b).norm() / a.norm(), 1e-10));
  }
  {
    const Vec x0 = carleman_default_state(n);
    const auto tab = gauss_tableau(4);
    double prev = std::numeric_limits<double>::infinity();
    double worst_increase = 0.0;
    for (int levels = 2; levels <= 4; ++levels) {
      const auto csys = build_carleman(field, levels);
      const double res = std::max(
          symplectic_residual(csys, x0, tab, 0.02, 50), 1e-10);
      if (std::isfinite(prev)) worst_increase = std::max(worst_increase, res / prev);
      prev = res;
    }
    out.push_back(at_most("carleman.residual_monotone", worst_increase, 1.0));
  }
  {
    const auto csys = build_carleman(damped_toy_field(), 3);
    Vec x0(2);
    x0 << 0.3, -0.2;
    const auto rep = normal_form_check(csys, x0, 1.0, 10);
    out.push_back(at_most("carleman.spectrum_sums", rep.spectrum_mismatch, 1e-8));
    out.push_back({"carleman.normal_form", rep.within_certificate,
                   rep.max_deviation, rep.max_certified});
  }
  {
    const auto res = resonance_margin(oscillator(), 4, ResonanceMode::full);
    out.push_back({"carleman.oscillator_resonant", res.resonant, res.delta, 0.0});
  }
}

void bounds_suite(const VerifyOptions& opts, std::vector<CheckResult>& out) {
  {
    CounterRng rng(opts.seed, kToyStream + 1);
    double worst = 0.0;
    bool nilpotent = true;
    for (int i = 0; i < 5; ++i) {
      const auto csys = build_carleman(small_quadratic_field(rng, 0.05), 3);
      const auto rep = verify_norm_bound(csys, {0.1, 0.5, 1.0});
      nilpotent = nilpotent && rep.nilpotent;
      for (const auto& s : rep.samples) worst = std::max(worst, s.measured / s.bound);
    }
    out.push_back(at_most("bounds.norm_envelope", worst, 1.0));
    out.push_back({"bounds.nilpotent", nilpotent, nilpotent ? 0.0 : 1.0, 0.0});
  }
  {
    const auto ens = kappa_g_ensemble(50, opts.seed, opts.threads);
    out.push_back({"bounds.kappa_g", ens.max_ratio < 1.0, ens.max_kappa,
                   2.0 + 2.0 * std::sqrt(static_cast<double>(ens.worst_p))});
  }
  {
    // Carleman history chain: kappa(L) <= c M max_j ||R^j|| ||R||
    CounterRng rng(opts.seed, kToyStream + 2);
    const PolynomialField toy{to_sparse(oscillator()),
                              small_quadratic_field(rng, 0.05).f2};
    const auto csys = build_carleman(toy, 3);
    const double tau = 0.05;
    const Index m = 40;
    const auto step = carleman_step_operator(csys, gauss_tableau(2), tau);
    const auto sys = assemble(step, lift(Vec::Constant(2, 0.3), 3), m, 0);
    const double kappa = condition_number(sys, ConditionMethod::exact, rng).kappa;
    const auto spec = spectral_report(Mat(csys.f1));
    const double nf2 = spectral_norm(csys.f2);
    double max_pow = 0.0;
    double envelope_ratio = 0.0;
    Mat power = Mat::Identity(step.dim(), step.dim());
    for (Index j = 1; j <= m; ++j) {
      power = power * step.r;
      const double pn = spectral_norm(power);
      max_pow = std::max(max_pow, pn);
      envelope_ratio = std::max(
          envelope_ratio,
          pn / NormBoundReport::envelope(j * tau, spec.kappa_v, nf2, csys.N));
    }
    const double chain = 4.0 * static_cast<double>(m) * max_pow * spectral_norm(step.r);
    out.push_back(at_most("bounds.history_chain", kappa, chain));
    out.push_back(at_most("bounds.step_power_envelope", envelope_ratio, 1.0 + 1e-6));
  }
  {
    // stability flag against sampled ||e^{tK}||
    CounterRng rng(opts.seed, kToyStream + 4);
    double worst = 0.0;
    bool flags = true;
    for (int i = 0; i < 10; ++i) {
      const Mat k = random_stable_generator(1 + i % 3, rng);
      const auto rep = spectral_report(k);
      flags = flags && rep.stable;
      for (double t : {1.0, 10.0, 100.0}) {
        worst = std::max(worst, spectral_norm(Mat((t * k).exp())) / rep.kappa_v);
      }
    }
    Mat saddle(2, 2);
    saddle << 0.1, 0.0, 0.0, -0.1;
    const auto rep = spectral_report(saddle);
    const double growth = spectral_norm(Mat((100.0 * saddle).exp())) / rep.kappa_v;
    out.push_back(at_most("bounds.stable_growth", worst, 1.0 + 1e-8));
    out.push_back({"bounds.stability_flags", flags && !rep.stable, growth, 1.0});
  }
  {
    const auto scaling = condition_scaling({10, 20, 40}, 4, opts.seed, opts.threads);
    out.push_back(at_most("bounds.condition_envelope",
                          scaling.c_max / scaling.c_median, 10.0));
  }
}

}  // namespace

// ---------------------------------------------------------------- measurements

SymplecticEnsemble symplectic_ensemble(int count, std::uint64_t seed,
                                       int threads) {
  struct Sample {
    double defect = 0.0;
    double modulus = 0.0;
    double tau_norm = 0.0;
  };
  const auto samples = parallel_indices<Sample>(count, threads, [&](Index i) {
    CounterRng rng(seed, kSymplecticStream + static_cast<std::uint64_t>(i));
    const Index d = 1 + i % 4;
    const int p = 1 + static_cast<int>(i % 3);
    const Mat k = random_stable_generator(d, rng);
    const double tau = rng.uniform(0.1, 0.5) / spectral_norm(k);
    const auto step = build_step_operator(gauss_tableau(p), k, tau, StepOptions{false});
    Sample s;
    s.defect = symplectic_defect(step.r);
    const CVec ev = Eigen::EigenSolver<Mat>(step.r, false).eigenvalues();
    s.modulus = (ev.array().abs() - 1.0).abs().maxCoeff();
    s.tau_norm = step.tau_norm;
    return s;
  });
  SymplecticEnsemble out;
  out.instances = count;
  for (const auto& s : samples) {
    out.max_defect = std::max(out.max_defect, s.defect);
    out.max_modulus_error = std::max(out.max_modulus_error, s.modulus);
    out.max_tau_norm = std::max(out.max_tau_norm, s.tau_norm);
  }
  return out;
}

double oscillator_order(const ButcherTableau& tab,
                        const std::vector<double>& taus, double horizon) {
  const Mat k = oscillator();
  Vec x0(2);
  x0 << 1.0, 0.0;
  Vec exact(2);
  exact << std::cos(horizon), -std::sin(horizon);
  std::vector<double> errors;
  for (double tau : taus) {
    const Index steps = static_cast<Index>(std::llround(horizon / tau));
    if (std::abs(steps * tau - horizon) > 1e-9 * horizon) {
      throw ParameterDomainError("oscillator_order: tau must divide the horizon");
    }
    const auto step = build_step_operator(tab, k, tau, StepOptions{false});
    errors.push_back((integrate_linear(step, x0, steps, steps).final_state() - exact).norm());
  }
  return order_fit(errors, taus);
}

HistoryEnsemble history_ensemble(int count, std::uint64_t seed, int threads) {
  struct Sample {
    double final_error = 0.0;
    double tail = 0.0;
    double residual = 0.0;
    double lu_final_error = 0.0;
    Index nnz_mismatch = 0;
    bool padded = false;
  };
  const auto samples = parallel_indices<Sample>(count, threads, [&](Index i) {
    CounterRng rng(seed, kHistoryStream + static_cast<std::uint64_t>(i));
    Mat k;
    if (i % 4 == 3) {
      k = make_harmonic_chain(2 + i % 3, 1.0, 1.0, Boundary::fixed).generator();
    } else {
      k = random_stable_generator(1 + i % 3, rng);
    }
    const int p = 1 + static_cast<int>(i % 3);
    const double tau = rng.uniform(0.1, 0.5) / spectral_norm(k);
    const Index m = 10 + static_cast<Index>(rng.uniform() * 91.0);
    const Index r = (i % 2) ? m : 0;
    Vec x0(k.rows());
    for (Index j = 0; j < x0.size(); ++j) x0[j] = rng.normal();
    const auto step = build_step_operator(gauss_tableau(p), k, tau, StepOptions{false});
    const auto sys = assemble(step, x0, m, r);
    const auto sol = solve(sys);
    const Vec seq = integrate_linear(step, x0, m, m).final_state();
    Sample s;
    s.padded = r > 0;
    s.final_error = (sol.final_state - seq).norm() / seq.norm();
    for (Index b = m + 1; b < sys.blocks(); ++b) {
      s.tail = std::max(s.tail, (sol.block(b) - sol.block(m)).norm());
    }
    s.residual = sol.residual / sys.rhs().norm();
    Eigen::SparseLU<SpMat> lu(sys.matrix());
    const Vec h = lu.solve(sys.rhs());
    const Index n = k.rows();
    s.lu_final_error = (h.segment(m * n, n) - seq).norm() / seq.norm();
    s.nnz_mismatch = std::abs(sys.matrix().nonZeros() - sys.expected_nnz());
    return s;
  });
  HistoryEnsemble out;
  out.instances = count;
  for (const auto& s : samples) {
    out.max_final_error = std::max(out.max_final_error, s.final_error);
    out.max_tail_spread = std::max(out.max_tail_spread, s.tail);
    out.max_residual = std::max(out.max_residual, s.residual);
    out.max_lu_final_error = std::max(out.max_lu_final_error, s.lu_final_error);
    out.nnz_mismatch += s.nnz_mismatch;
    out.padded_instances += s.padded ? 1 : 0;
  }
  return out;
}

ConditionScaling condition_scaling(const std::vector<Index>& ms, int members,
                                   std::uint64_t seed, int threads) {
  if (ms.size() < 2 || members < 1) {
    throw ParameterDomainError("condition_scaling: need >= 2 sizes and >= 1 member");
  }
  struct Member {
    std::vector<double> kappa;
    std::vector<double> padded;
    std::vector<double> c;
  };
  const Index m0 = ms.front();
  const auto rows = parallel_indices<Member>(members, threads, [&](Index i) {
    CounterRng rng(seed, kConditionStream + static_cast<std::uint64_t>(i));
    const Mat k = random_stable_generator(1 + i % 2, rng);
    const double kv = spectral_report(k).kappa_v;
    const double tau = 0.2 / spectral_norm(k);
    const auto step = build_step_operator(gauss_tableau(1 + static_cast<int>(i % 2)),
                                          k, tau, StepOptions{false});
    const Vec x0 = Vec::Ones(k.rows());
    Member out;
    for (Index m : ms) {
      const auto kl = condition_number(assemble(step, x0, m, 0),
                                       ConditionMethod::exact, rng).kappa;
      out.kappa.push_back(kl);
      out.c.push_back(kl / (static_cast<double>(m) * kv * kv));
      const auto kp = condition_number(assemble(step, x0, m0, m),
                                       ConditionMethod::exact, rng).kappa;
      out.padded.push_back(kp);
    }
    return out;
  });
  ConditionScaling out;
  std::vector<double> lx;
  std::vector<double> ly;
  std::vector<double> px;
  std::vector<double> py;
  for (std::size_t j = 0; j < ms.size(); ++j) {
    double mean = 0.0;
    double pmean = 0.0;
    for (const auto& r : rows) {
      mean += r.kappa[j];
      pmean += r.padded[j];
    }
    mean /= members;
    pmean /= members;
    const double m = static_cast<double>(ms[j]);
    const double mr = static_cast<double>(m0 + ms[j]);
    out.ms.push_back(m);
    out.kappa.push_back(mean);
    out.padded_ms.push_back(mr);
    out.padded_kappa.push_back(pmean);
    lx.push_back(std::log(m));
    ly.push_back(std::log(mean));
    px.push_back(std::log(mr));
    py.push_back(std::log(pmean));
  }
  for (const auto& r : rows) {
    out.c_ratios.insert(out.c_ratios.end(), r.c.begin(), r.c.end());
  }
  out.slope = linear_fit(lx, ly).slope;
  out.padded_slope = linear_fit(px, py).slope;
  out.c_median = median(out.c_ratios);
  out.c_max = *std::max_element(out.c_ratios.begin(), out.c_ratios.end());
  return out;
}

KappaGEnsemble kappa_g_ensemble(int count, std::uint64_t seed, int threads) {
  struct Sample {
    double kappa = 0.0;
    double ratio = 0.0;
    int p = 0;
  };
  const auto samples = parallel_indices<Sample>(count, threads, [&](Index i) {
    CounterRng rng(seed, kKappaGStream + static_cast<std::uint64_t>(i));
    const int p = 1 + static_cast<int>(i % 8);
    const Mat k = random_stable_generator(1 + i % 4, rng);
    const double limit = 1.0 / (2.0 * std::sqrt(static_cast<double>(p)));
    const double tau = rng.uniform(0.05, 0.999) * limit / spectral_norm(k);
    const auto step = build_step_operator(gauss_tableau(p), k, tau);
    if (!step.kappa_g_exact) {
      throw CapabilityError("kappa_g_ensemble expects exact kappa(G)");
    }
    return Sample{step.kappa_g, step.kappa_g / step.kappa_g_bound, p};
  });
  KappaGEnsemble out;
  out.instances = count;
  for (const auto& s : samples) {
    out.max_kappa = std::max(out.max_kappa, s.kappa);
    if (s.ratio > out.max_ratio) {
      out.max_ratio = s.ratio;
      out.worst_p = s.p;
    }
  }
  return out;
}

PolynomialField small_quadratic_field(CounterRng& rng, double f2_scale) {
  const Mat f1 = random_stable_generator(1, rng);
  Mat f2(2, 4);
  for (Index j = 0; j < 4; ++j) {
    for (Index i = 0; i < 2; ++i) f2(i, j) = f2_scale * rng.normal();
  }
  return {to_sparse(f1), to_sparse(f2)};
}

PolynomialField damped_toy_field() {
  Mat f1(2, 2);
  f1 << -0.1, 1.0, -1.0, -0.1;
  Mat f2 = Mat::Zero(2, 4);
  f2(0, 0) = 0.1;
  f2(0, 3) = -0.05;
  f2(1, 1) = 0.05;
  f2(1, 2) = 0.05;
  f2(1, 3) = 0.1;
  return {to_sparse(f1), to_sparse(f2)};
}

// ---------------------------------------------------------------- reporting

std::vector<CheckResult> run_verify(const std::string& suite,
                                    const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (!all && suite != "rkg" && suite != "history" && suite != "carleman" &&
      suite != "bounds") {
    throw ParameterDomainError("unknown verify suite '" + suite +
                               "' (all | rkg | history | carleman | bounds)");
  }
  if (all || suite == "rkg") rkg_suite(opts, out);
  if (all || suite == "history") history_suite(opts, out);
  if (all || suite == "carleman") carleman_suite(opts, out);
  if (all || suite == "bounds") bounds_suite(opts, out);
  return out;
}

std::string format_checks(const std::vector<CheckResult>& checks) {
  std::string out = "check_name,status,measured,threshold\n";
  for (const auto& c : checks) {
    out += c.name + ',' + (c.passed ? "pass" : "fail") + ',' +
           format_double(c.measured) + ',' + format_double(c.threshold) + '\n';
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

}  // namespace symplectic
