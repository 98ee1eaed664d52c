#pragma once

// Property suites run by `verify` and reused by the acceptance binary.

#include <cstdint>
#include <string>
#include <vector>

#include "symplectic/carleman.hpp"
#include "symplectic/rkg.hpp"

namespace symplectic {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int threads = 1;
  bool corrupt_tableau = false;  // fault hook: perturbs a(0, 0) by 0.01
};

/// suite: all | rkg | history | carleman | bounds.
std::vector<CheckResult> run_verify(const std::string& suite,
                                    const VerifyOptions& opts = {});

/// `check_name,status,measured,threshold` lines with a header.
std::string format_checks(const std::vector<CheckResult>& checks);
bool all_passed(const std::vector<CheckResult>& checks);

// ---------------------------------------------------------------- measurements

struct SymplecticEnsemble {
  double max_defect = 0.0;
  double max_modulus_error = 0.0;  // max ||lambda(R)| - 1|
  double max_tau_norm = 0.0;
  int instances = 0;
};

/// Random stable K with d = 1..4, p = 1..3 cycling, tau ||K|| drawn in
/// [0.1, 0.5].
SymplecticEnsemble symplectic_ensemble(int count, std::uint64_t seed,
                                       int threads = 1);

/// Log-log slope of the final-time error on the unit harmonic oscillator.
double oscillator_order(const ButcherTableau& tab,
                        const std::vector<double>& taus, double horizon);

struct HistoryEnsemble {
  double max_final_error = 0.0;  // relative to ||x_M||
  double max_tail_spread = 0.0;  // max_m ||x_m - x_M|| over padded blocks
  double max_residual = 0.0;     // ||L h - b|| / ||b||
  double max_lu_final_error = 0.0;  // same as max_final_error via sparse LU
  Index nnz_mismatch = 0;
  int instances = 0;
  int padded_instances = 0;
};

/// count instances: random stable K (d = 1..3) and harmonic chains,
/// p = 1..3, M in [10, 100], every other instance padded with r = M.
HistoryEnsemble history_ensemble(int count, std::uint64_t seed,
                                 int threads = 1);

struct ConditionScaling {
  std::vector<double> ms;
  std::vector<double> kappa;         // mean kappa(L) over the ensemble
  double slope = 0.0;                // log kappa against log M
  std::vector<double> padded_ms;     // M + r at fixed M
  std::vector<double> padded_kappa;  // kappa of the padded system
  double padded_slope = 0.0;
  std::vector<double> c_ratios;      // kappa(L) / (M kappa_V^2) per instance
  double c_median = 0.0;
  double c_max = 0.0;
};

ConditionScaling condition_scaling(const std::vector<Index>& ms, int members,
                                   std::uint64_t seed, int threads = 1);

struct KappaGEnsemble {
  double max_kappa = 0.0;
  double max_ratio = 0.0;  // kappa(G) / (2 + 2 sqrt(p))
  int instances = 0;
  int worst_p = 0;
};

/// p cycles 1..8, tau ||K|| drawn below 1 / (2 sqrt(p)).
KappaGEnsemble kappa_g_ensemble(int count, std::uint64_t seed,
                                int threads = 1);

/// n = 2 system: random stable F1 and F2 with entries of size `f2_scale`.
PolynomialField small_quadratic_field(CounterRng& rng, double f2_scale);

/// Damped rotation F1 = [[-0.1, 1], [-1, -0.1]] with a fixed quadratic term.
PolynomialField damped_toy_field();

}  // namespace symplectic
