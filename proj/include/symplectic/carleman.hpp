#pragma once

// Truncated Carleman embedding of x' = F1 x + F2 (x (x) x).
//
// The lifted state is y = (x, x(x)x, ..., x^{(x)N}) and obeys y' = A y with
//
//   A_jj     = sum_{i=0}^{j-1} I^{(x)i} (x) F1 (x) I^{(x)(j-1-i)}   (n^j x n^j)
//   A_j,j+1  = sum_{i=0}^{j-1} I^{(x)i} (x) F2 (x) I^{(x)(j-1-i)}   (n^j x n^{j+1})
//
// and every other block zero. Kronecker products are first-factor-major,
// matching the column index j * n + k of F2.

#include <optional>
#include <string>
#include <vector>

#include "symplectic/diagnostics.hpp"
#include "symplectic/history.hpp"
#include "symplectic/linalg.hpp"
#include "symplectic/models.hpp"
#include "symplectic/rkg.hpp"

namespace symplectic {

constexpr Index kCarlemanNnzBudget = 10'000'000;

struct CarlemanSystem {
  int N = 0;
  Index n = 0;
  SpMat f1;
  SpMat f2;
  SpMat a;
  std::vector<Index> offsets;  // offsets[j-1] = start of block j; back() = total

  // Embedding parameters, filled by diagnose_embedding().
  double mu = 0.0;
  double delta = 0.0;
  double rr = 0.0;
  double kappa1_v = 0.0;

  Index total_dim() const noexcept { return offsets.back(); }
  Index block_size(int j) const noexcept { return offsets[j] - offsets[j - 1]; }
  /// Dense copy of block (i, j), 1-based.
  Mat block(int i, int j) const;
  /// Block-diagonal and block-superdiagonal parts of A.
  SpMat diagonal_part() const;
  SpMat coupling_part() const;
  PolynomialField field() const { return {f1, f2}; }
};

/// n + n^2 + ... + n^N
Index carleman_dim(Index n, int n_levels);
/// Nonzeros of A predicted from the nonzeros of F1 and F2.
Index carleman_nnz(Index n, int n_levels, Index nnz_f1, Index nnz_f2);

/// Throws CapabilityError when the predicted nonzero count exceeds 1e7.
CarlemanSystem build_carleman(const PolynomialField& field, int n_levels);
CarlemanSystem build_carleman(const CubicHamiltonian& h, int n_levels);

/// x^{(x)j}
Vec kron_power(const Vec& x, int j);
/// (x, x(x)x, ..., x^{(x)N})
Vec lift(const Vec& x, int n_levels);
/// dy/dx, total_dim x n; block j is sum_i x^{(x)i} (x) I (x) x^{(x)(j-1-i)}.
Mat lift_jacobian(const Vec& x, int n_levels);

enum class ResonanceMode {
  full,            // every multiset of eigenvalue indices
  non_cancelling,  // skip multisets holding a pair lambda_a + lambda_b = 0
};

struct ResonanceResult {
  double delta = 0.0;
  bool resonant = false;
  std::vector<Index> witness;  // eigenvalue indices of the closest sum
  Index witness_target = -1;   // index i of the eigenvalue it approaches
  Complex witness_sum{0.0, 0.0};
  CVec eigenvalues;
  Index multisets_checked = 0;
  int max_order = 0;

  /// Human-readable description of the witness sum.
  std::string describe() const;
};

constexpr double kResonanceTolerance = 1e-10;

/// Delta = min over multisets m with 2 <= |m| <= max_order of
/// min_i |sum_{k in m} lambda_k - lambda_i|. Returns 0 at the first sum
/// within 1e-10 (relative to max |lambda|, at least 1) of an eigenvalue.
/// Throws DiagonalizabilityError for defective F1 and CapabilityError when
/// more than 1e7 multisets would be enumerated.
ResonanceResult resonance_margin(const Mat& f1, int max_order,
                                 ResonanceMode mode = ResonanceMode::full);

/// R_r = 4 e mu kappa_1(V) ||F2||_1 / Delta. Zero when F2 = 0; otherwise
/// ResonanceError when Delta = 0.
double convergence_radius(double mu, double kappa1_v, double norm1_f2,
                          double delta);
double convergence_radius(const Mat& f1, const SpMat& f2, double mu,
                          int max_order);

/// Fills mu, delta, rr and kappa1_v. Resonant systems get delta = 0 and
/// rr = +inf unless F2 = 0.
void diagnose_embedding(CarlemanSystem& csys, double mu);

/// 1.25 max_t ||x(t)||_1 over a coarse RKG(p = 2) run on [0, T] with 200
/// steps.
double estimate_mu(const PolynomialField& field, const Vec& x0,
                   double horizon);

struct TruncationChoice {
  int n_levels = 0;
  double bound = 0.0;        // N T R_r^{N-1} at the chosen N
  double lambert_estimate = 0.0;
  bool lambert_valid = false;  // eps < T / (e log(1/R_r))
};

constexpr int kTruncationFloor = 2;
constexpr int kTruncationCeiling = 12;

/// Smallest N in [2, 12] with N T R_r^{N-1} <= eps. R_r = 0 returns the
/// floor. Throws TruncationInfeasibleError (carrying the bound at N = 12)
/// when no level qualifies and ParameterDomainError for R_r >= 1.
TruncationChoice choose_truncation(double horizon, double eps, double rr);

enum class CarlemanRoute { sequential, history };

/// R(tau A) for the full lifted system.
StepOperator carleman_step_operator(const CarlemanSystem& csys,
                                    const ButcherTableau& tab, double tau,
                                    bool compute_kappa = false);

/// First-block trajectory y_1(t_n). The history route solves the global
/// block system with no padding and reads the blocks back.
Trajectory integrate_carleman(const CarlemanSystem& csys, const Vec& x0,
                              const ButcherTableau& tab, double tau,
                              Index steps,
                              CarlemanRoute route = CarlemanRoute::sequential,
                              Index stride = 1);
Trajectory integrate_carleman(const CarlemanSystem& csys,
                              const StepOperator& step, const Vec& x0,
                              Index steps,
                              CarlemanRoute route = CarlemanRoute::sequential,
                              Index stride = 1);

enum class JacobianMethod { exact, finite_difference };

/// W11 = d y_1(T) / d x0 after `steps` steps from the lifted initial state.
Mat carleman_w11(const CarlemanSystem& csys, const StepOperator& step,
                 const Vec& x0, Index steps,
                 JacobianMethod method = JacobianMethod::exact);

/// ||W11^T J W11 - J||_2
double symplectic_residual(const CarlemanSystem& csys, const Vec& x0,
                           const ButcherTableau& tab, double tau, Index steps,
                           JacobianMethod method = JacobianMethod::exact);

struct NormBoundSample {
  double t = 0.0;
  double measured = 0.0;  // ||exp(t A)||_2
  double bound = 0.0;
};

struct NormBoundReport {
  double kappa_v = 0.0;
  double norm_f2 = 0.0;
  std::vector<NormBoundSample> samples;
  bool nilpotent = false;   // A_1^N == 0 exactly
  Index nilpotent_nnz = 0;  // nonzeros left in A_1^N
  bool holds = false;       // every sample within its bound (1e-12 relative) and nilpotent

  /// kappa^N sum_{k<N} t^k/k! (kappa^N N ||F2||)^k
  static double envelope(double t, double kappa_v, double norm_f2, int n_levels);
};

constexpr Index kDenseExponentialLimit = 4000;

NormBoundReport verify_norm_bound(const CarlemanSystem& csys,
                                  const std::vector<double>& t_samples);

struct NormalFormSample {
  double t = 0.0;
  double deviation = 0.0;       // ||z1(t) - e^{Lambda t} z1(0)||
  double lifted_error = 0.0;    // ||lift(x(t)) - e^{tA} lift(x0)||
  double certified = 0.0;       // ||E1 W^{-1}|| * lifted_error
  double linear_deviation = 0.0;  // same quantity in plain eigencoordinates
};

struct NormalFormReport {
  std::vector<NormalFormSample> samples;
  double z1_norm = 0.0;          // ||z1(0)||
  double e1_winv_norm = 0.0;
  double kappa_w = 0.0;
  double spectrum_mismatch = 0.0;  // eigenvalues of A vs <= N-fold sums
  double max_deviation = 0.0;
  double max_certified = 0.0;
  double max_linear_deviation = 0.0;
  bool within_certificate = false;  // deviation <= certified at every sample
};

constexpr Index kNormalFormLimit = 200;

/// Block upper-triangular eigenvector matrix W of A, built level by level
/// from the Kronecker powers of the eigenvectors of F1. Throws
/// DiagonalizabilityError when a level sum collides with a lower-level
/// eigenvalue.
CMat carleman_eigenvectors(const CarlemanSystem& csys, CVec& eigenvalues);

/// Compares z1 = E1 W^{-1} lift(x(t)) against e^{Lambda t} z1(0) along a
/// reference nonlinear trajectory of the field, sampled at `samples` evenly
/// spaced times in (0, T].
NormalFormReport normal_form_check(const CarlemanSystem& csys, const Vec& x0,
                                   double horizon, int samples = 10);

}  // namespace symplectic
