// Acceptance suite: one line per criterion.
//
//   acceptance                 run all criteria
//   acceptance --criterion 8   run one
//
// Exit status is nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symplectic/carleman.hpp"
#include "symplectic/diagnostics.hpp"
#include "symplectic/experiments.hpp"
#include "symplectic/history.hpp"
#include "symplectic/models.hpp"
#include "symplectic/rkg.hpp"
#include "symplectic/verify.hpp"

using namespace symplectic;

namespace {

constexpr std::uint64_t kSeed = 20240917;

struct Outcome {
  bool passed = false;
  std::string measured;
  std::string threshold;
};

struct Criterion {
  int id;
  const char* name;
  double runtime_limit;  // seconds
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), pattern, a);
  return buf;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

std::string fmt(const char* pattern, double a, double b, double c) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

Outcome symplecticity() {
  const auto ens = symplectic_ensemble(50, kSeed);
  const bool ok = ens.instances == 50 && ens.max_tau_norm <= 0.5 &&
                  ens.max_defect <= 1e-10 && ens.max_modulus_error <= 1e-10;
  return {ok, fmt("defect=%.3e modulus=%.3e", ens.max_defect, ens.max_modulus_error),
          "1e-10"};
}

Outcome superconvergence() {
  const std::vector<std::vector<double>> grids{
      {0.2, 0.1, 0.05, 0.025}, {0.4, 0.2, 0.1, 0.05}, {0.5, 0.25, 0.125, 0.0625}};
  std::vector<double> slopes;
  bool ok = true;
  for (int p = 1; p <= 3; ++p) {
    const double slope = oscillator_order(gauss_tableau(p), grids[p - 1], 20.0);
    slopes.push_back(slope);
    ok = ok && std::abs(slope - 2.0 * p) <= 0.1 * 2.0 * p;
  }
  return {ok, fmt("slopes=%.4f,%.4f,%.4f", slopes[0], slopes[1], slopes[2]),
          "|slope-2p|<=0.2p"};
}

Outcome linear_energy() {
  const auto chain = make_harmonic_chain(8, 1.0, 1.0);
  const Vec x0 = fpu_thermal_state(8, 1.0, 0.5, kSeed);
  const auto traj = integrate_linear(gauss_tableau(2), chain.generator(), x0, 0.1,
                                     100000, 100);
  const auto drift = energy_drift(HamiltonianSystem{chain}, traj);
  return {drift.max_drift <= 1e-9, fmt("max_drift=%.3e", drift.max_drift), "1e-9"};
}

struct BenchVerdict {
  bool ok = false;
  std::string text;
};

BenchVerdict judge_bench(const char* label, const std::vector<BenchResult>& runs) {
  double rk4 = 0.0;
  double symplectic = 0.0;
  bool bounded = true;
  for (const auto& r : runs) {
    if (r.method == "rk4") {
      rk4 = r.drift.trend.slope;
    } else {
      symplectic = std::max(symplectic, std::abs(r.drift.trend.slope));
      bounded = bounded && r.drift.trend_within(3.0);
    }
  }
  const bool ok = rk4 > 0.0 && rk4 > 100.0 * symplectic && bounded;
  return {ok, std::string(label) + fmt(": rk4_slope=%.3e sympl_slope=%.3e ratio=%.1f",
                                       rk4, symplectic, rk4 / symplectic) +
                  (bounded ? " bounded" : " TREND")};
}

Outcome fig1_drift() {
  BenchConfig bench;
  bench.steps = 100000;
  bench.stride = 100;
  bench.p = 2;
  bench.solver = StageSolver::fixed_point;
  bench.tol = 1e-15;

  const auto fpu = make_fpu_chain(32, 1.0, 0.25, 1.0);
  bench.tau = 0.1;
  const auto a = judge_bench(
      "fpu32", run_energy_bench(HamiltonianSystem{fpu},
                                fpu_thermal_state(32, 1.0, 0.5, kSeed), bench));

  LennardJonesParams lj;
  lj.particles = 64;
  lj.box = 9.6;
  lj.spatial_dim = 2;
  bench.tau = 0.005;
  const auto b = judge_bench(
      "lj64", run_energy_bench(HamiltonianSystem{make_lennard_jones(lj)},
                               lj_thermal_state(lj, 0.5, kSeed), bench));
  return {a.ok && b.ok, a.text + "; " + b.text,
          "rk4>0, rk4>100*sympl, sympl trend<=3sigma"};
}

Outcome history_equivalence() {
  const auto ens = history_ensemble(20, kSeed);
  const bool ok = ens.instances == 20 && ens.padded_instances > 0 &&
                  ens.max_final_error <= 1e-10 && ens.max_lu_final_error <= 1e-10 &&
                  ens.max_tail_spread <= 1e-12;
  return {ok, fmt("final=%.3e lu_final=%.3e tail=%.3e", ens.max_final_error,
                  ens.max_lu_final_error, ens.max_tail_spread),
          "final<=1e-10 tail<=1e-12"};
}

Outcome condition_envelope() {
  const auto s = condition_scaling({10, 20, 40, 80}, 6, kSeed);
  const bool ok = s.slope <= 1.2 && s.padded_slope > 0.0 && s.padded_slope <= 1.2;
  return {ok, fmt("slope=%.4f padded_slope=%.4f", s.slope, s.padded_slope),
          "slope<=1.2, 0<padded_slope<=1.2"};
}

Outcome kappa_g() {
  const auto ens = kappa_g_ensemble(50, kSeed);
  return {ens.instances == 50 && ens.max_ratio < 1.0,
          fmt("max_ratio=%.4f max_kappa=%.4f worst_p=%.0f", ens.max_ratio,
              ens.max_kappa, ens.worst_p),
          "kappa(G)<2+2sqrt(p)"};
}

const CarlemanStudy& fpu_study() {
  static const CarlemanStudy study = [] {
    CarlemanStudyConfig cfg;
    cfg.finite_difference_check = false;
    return run_carleman_study(cfg);
  }();
  return study;
}

Outcome truncation_decay() {
  const auto& s = fpu_study();
  bool decays = true;
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    decays = decays && s.rows[i].error < s.rows[i - 1].error;
  }
  const bool in_band = std::isfinite(s.rr) && s.fitted_ratio >= 0.5 * s.rr &&
                       s.fitted_ratio <= 2.0 * s.rr;
  return {decays && in_band,
          fmt("fitted_ratio=%.4g rr=%.4g rr_noncancel=%.4g", s.fitted_ratio, s.rr,
              s.rr_noncancel),
          "[0.5*rr, 2*rr]"};
}

Outcome approximate_symplecticity() {
  const auto& s = fpu_study();
  bool monotone = true;
  for (std::size_t i = 1; i < s.rows.size(); ++i) {
    monotone = monotone && s.rows[i].residual <= s.rows[i - 1].residual;
  }
  const auto& last = s.rows.back();
  const bool ok = monotone && last.n_levels == 5 && last.residual <= 10.0 * last.error;
  return {ok, fmt("residual_N5=%.3e error_N5=%.3e", last.residual, last.error),
          "nonincreasing, residual<=10*error"};
}

Outcome norm_envelope() {
  CounterRng rng(kSeed, 10);
  double worst = 0.0;
  bool nilpotent = true;
  for (int i = 0; i < 5; ++i) {
    const auto csys = build_carleman(small_quadratic_field(rng, 0.05), 3);
    const auto rep = verify_norm_bound(csys, {0.1, 0.5, 1.0});
    nilpotent = nilpotent && rep.nilpotent;
    for (const auto& s : rep.samples) worst = std::max(worst, s.measured / s.bound);
  }
  return {nilpotent && worst <= 1.0,
          fmt("max_measured/envelope=%.4f nilpotent=%.0f", worst, nilpotent ? 1.0 : 0.0),
          "<=1, A1^N=0"};
}

Outcome normal_form() {
  const auto csys = build_carleman(damped_toy_field(), 3);
  Vec x0(2);
  x0 << 0.3, -0.2;
  const auto rep = normal_form_check(csys, x0, 1.0, 10);
  return {rep.within_certificate && rep.spectrum_mismatch < 1e-8,
          fmt("deviation=%.3e certified=%.3e linear=%.3e", rep.max_deviation,
              rep.max_certified, rep.max_linear_deviation),
          "deviation<=certified"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11)")
      ->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "rkg symplecticity", 10.0, symplecticity},
      {2, "order 2p superconvergence", 30.0, superconvergence},
      {3, "linear energy conservation", 60.0, linear_energy},
      {4, "energy drift fpu32/lj64", 600.0, fig1_drift},
      {5, "history solve equivalence", 10.0, history_equivalence},
      {6, "condition number envelope", 60.0, condition_envelope},
      {7, "kappa(G) bound", 10.0, kappa_g},
      {8, "carleman truncation decay", 300.0, truncation_decay},
      {9, "approximate symplecticity", 300.0, approximate_symplecticity},
      {10, "carleman norm envelope", 10.0, norm_envelope},
      {11, "normal form", 10.0, normal_form},
  };

  bool all_ok = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.measured = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.runtime_limit;
    const bool ok = o.passed && in_time;
    all_ok = all_ok && ok;
    std::printf("criterion %d: %s [%s] measured %s threshold %s runtime %.2fs (limit %.0fs)\n",
                c.id, ok ? "PASS" : "FAIL", c.name, o.measured.c_str(),
                o.threshold.c_str(), seconds, c.runtime_limit);
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
