#pragma once

// Runge-Kutta Gauss collocation: tableaux, the scalar stability function,
// the matrix step operator R(tau K) and time stepping for linear and
// nonlinear Hamiltonian systems. Classical RK4 and Stormer-Verlet are
// provided as baselines.

#include <memory>
#include <vector>

#include "symplectic/linalg.hpp"
#include "symplectic/models.hpp"

namespace symplectic {

struct ButcherTableau {
  int p = 0;
  Mat a;  // p x p stage matrix
  Vec b;  // weights
  Vec c;  // nodes in (0, 1)
};

/// p-stage Gauss method, 1 <= p <= 16. Nodes are Newton-refined roots of the
/// shifted Legendre polynomial; A_ij = int_0^{c_i} l_j(s) ds is evaluated
/// with the same quadrature rule mapped to [0, c_i].
ButcherTableau gauss_tableau(int p);

/// Shifted Legendre polynomial P_p(2t - 1).
double shifted_legendre(int p, double t);

/// R(z) = 1 + z b^T (I - z A)^{-1} 1.
Complex stability_scalar(const ButcherTableau& tab, Complex z);

/// Spectral radius of the stage matrix.
double stage_spectral_radius(const ButcherTableau& tab);

struct StepOperator {
  Mat r;
  double tau = 0.0;
  int p = 0;
  double tau_norm = 0.0;  // tau * ||K||_2
  double kappa_g = 0.0;   // condition number of G = I - A (x) tau K
  bool kappa_g_exact = false;
  double kappa_g_bound = 0.0;     // 2 + 2 sqrt(p)
  bool in_bound_regime = false;  // tau ||K|| < 1 / (2 sqrt(p))

  Index dim() const noexcept { return r.rows(); }
  /// Nonzero pattern of R (exact zeros dropped).
  SpMat sparse() const { return to_sparse(r); }
};

struct StepOptions {
  /// Compute kappa(G); exact SVD up to this stage-system size, randomized
  /// estimate above it.
  bool compute_kappa = true;
  Index exact_kappa_limit = 400;
};

/// R = I + (b^T (x) I) G^{-1} (1 (x) tau K). Throws StabilityDomainError when
/// tau ||K|| >= 1 and SingularityError when G cannot be factored.
StepOperator build_step_operator(const ButcherTableau& tab, const Mat& k,
                                 double tau, const StepOptions& opts = {});
StepOperator build_step_operator(const ButcherTableau& tab, const SpMat& k,
                                 double tau, const StepOptions& opts = {});

struct Trajectory {
  double tau = 0.0;
  Index steps = 0;
  std::vector<Index> step_index;
  std::vector<double> times;
  std::vector<Vec> states;

  std::size_t size() const noexcept { return states.size(); }
  const Vec& final_state() const { return states.back(); }
  void record(Index n, const Vec& x) {
    step_index.push_back(n);
    times.push_back(static_cast<double>(n) * tau);
    states.push_back(x);
  }
};

/// x_{n+1} = R x_n. States are recorded every `stride` steps and at the end.
Trajectory integrate_linear(const StepOperator& step, const Vec& x0,
                            Index steps, Index stride = 1);
Trajectory integrate_linear(const ButcherTableau& tab, const Mat& k,
                            const Vec& x0, double tau, Index steps,
                            Index stride = 1);

enum class StageSolver { automatic, fixed_point, newton };

struct NonlinearOptions {
  StageSolver solver = StageSolver::automatic;
  double tol = 1e-12;  // on max |increment| relative to 1 + |x|_inf
  int max_iter = 50;
  Index stride = 1;
};

/// Implicit Gauss collocation for a nonlinear field. The automatic solver
/// picks Newton for polynomial systems and fixed-point iteration for
/// separable force systems. Newton uses the field Jacobian at the start of
/// the step, factored once per step.
Trajectory integrate_nonlinear(const ButcherTableau& tab,
                               const HamiltonianSystem& system, const Vec& x0,
                               double tau, Index steps,
                               const NonlinearOptions& opts = {});
/// Same scheme for a bare polynomial field (Newton by default).
Trajectory integrate_nonlinear(const ButcherTableau& tab,
                               const PolynomialField& field, const Vec& x0,
                               double tau, Index steps,
                               const NonlinearOptions& opts = {});

Trajectory integrate_rk4(const HamiltonianSystem& system, const Vec& x0,
                         double tau, Index steps, Index stride = 1);

/// Velocity Verlet. Quadratic and cubic Hamiltonians are accepted when they
/// are separable; anything else raises UnsupportedSystemError.
Trajectory integrate_verlet(const HamiltonianSystem& system, const Vec& x0,
                            double tau, Index steps, Index stride = 1);

/// p = ceil(log X / (2 log log X)) with X = T kappa_V / eps, clamped to
/// [1, 16]; p = 1 when log log X <= 1.
int choose_stage_count(double horizon, double kappa_v, double eps);

}  // namespace symplectic
