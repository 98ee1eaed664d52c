#pragma once

// Composite studies shared by the command-line runner and the test suites.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "symplectic/carleman.hpp"
#include "symplectic/diagnostics.hpp"
#include "symplectic/models.hpp"
#include "symplectic/rkg.hpp"

namespace symplectic {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Results are
/// indexed by i, so the output does not depend on the thread count.
template <typename T, typename F>
std::vector<T> parallel_indices(Index count, int threads, F&& fn) {
  std::vector<T> out(static_cast<std::size_t>(count));
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (workers == 1) {
    for (Index i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Index i = w; i < count; i += workers) {
          out[static_cast<std::size_t>(i)] = fn(i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// B^T B / n + shift I with B standard Gaussian.
Mat random_spd(Index n, CounterRng& rng, double shift = 0.1);

/// K = 2 J Q for a random positive definite Q: purely imaginary spectrum.
Mat random_stable_generator(Index d, CounterRng& rng);

/// I + scale G / sqrt(n), G standard Gaussian.
Mat random_well_conditioned(Index n, CounterRng& rng, double scale = 0.3);

/// Positions at rest, momenta drawn from N(0, m T) with the mean removed.
Vec thermal_state(const Vec& positions, const Vec& masses, double temperature,
                  std::uint64_t seed);

/// Chain at rest in its reference configuration with thermal momenta.
Vec fpu_thermal_state(Index particles, double mass, double temperature,
                      std::uint64_t seed);

/// Lattice positions with thermal momenta.
Vec lj_thermal_state(const LennardJonesParams& params, double temperature,
                     std::uint64_t seed);

// ---------------------------------------------------------------- Carleman

struct CarlemanStudyConfig {
  Index particles = 2;
  double stiffness = 1.0;
  double alpha = 0.05;
  double mass = 1.0;
  Boundary boundary = Boundary::fixed;
  Vec x0;  // empty: unit-norm default
  double horizon = 1.0;
  int p = 4;
  double tau = 0.02;
  int reference_factor = 100;
  std::vector<int> levels{2, 3, 4, 5};
  bool finite_difference_check = true;
};

struct CarlemanStudyRow {
  int n_levels = 0;
  Index dim = 0;
  double norm_a = 0.0;
  double error = 0.0;        // ||y_1(T) - x_ref(T)||_2
  double residual = 0.0;     // ||W11^T J W11 - J||, exact W11
  double residual_fd = 0.0;  // same with finite differences
  double bound = 0.0;        // N T R_r^{N-1}
};

struct CarlemanStudy {
  Vec x0;
  double mu = 0.0;
  double kappa1_v = 0.0;
  double norm1_f2 = 0.0;
  ResonanceResult resonance;              // full enumeration, cap N_max + 2
  ResonanceResult resonance_noncancel;    // multisets without +/- pairs
  double rr = 0.0;            // from the full margin (inf when resonant)
  double rr_noncancel = 0.0;  // diagnostic radius from the restricted margin
  double fitted_ratio = 0.0;  // exp(slope of log error against N)
  double fitted_c = 0.0;      // max_N error / (N T ratio^{N-1})
  std::vector<CarlemanStudyRow> rows;
};

/// Default initial state for the FPU Carleman study: (0.5, -0.3, 0.2, 0.1)
/// pattern repeated and normalized to unit 2-norm.
Vec carleman_default_state(Index n);

CarlemanStudy run_carleman_study(const CarlemanStudyConfig& cfg);

// ---------------------------------------------------------------- energy bench

struct BenchConfig {
  double tau = 0.1;
  Index steps = 100000;
  Index stride = 100;
  int p = 2;
  StageSolver solver = StageSolver::fixed_point;
  double tol = 1e-12;
  int max_iter = 50;
  std::vector<std::string> methods{"rkg", "rk4", "verlet"};
};

struct BenchResult {
  std::string method;
  DriftSeries drift;
  double seconds = 0.0;
};

/// Throws ParameterDomainError for steps == 0 (empty series).
std::vector<BenchResult> run_energy_bench(const HamiltonianSystem& system,
                                          const Vec& x0,
                                          const BenchConfig& cfg);

}  // namespace symplectic
