#pragma once

// Dense/sparse aliases and the handful of linear-algebra kernels shared by
// every module: the canonical structure matrix, Kronecker sandwiches,
// operator norms and condition-number estimation.

#include <complex>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "symplectic/rng.hpp"

namespace symplectic {

using Index = Eigen::Index;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// J = [[0, I_d], [-I_d, 0]] for state ordering x = (q_1..q_d, p_1..p_d).
Mat canonical_j(Index d);

/// I_left (x) F (x) I_right, assembled directly from the nonzeros of F.
SpMat kron_sandwich(Index left, const SpMat& f, Index right);

/// Sparse view of a dense matrix, dropping exact zeros.
SpMat to_sparse(const Mat& a);

/// Induced 1-norm (max column sum).
double norm1(const Mat& a);
double norm1(const SpMat& a);

/// Induced 2-norm. Exact (SVD) for small matrices, otherwise power
/// iteration on A^T A converged to a relative change of 1e-12.
double spectral_norm(const Mat& a);
double spectral_norm(const SpMat& a);

/// sigma_max / sigma_min from a full SVD.
double condition_number(const Mat& a);

/// Matrix-free access to a square operator and its inverse.
struct OperatorView {
  Index dim = 0;
  std::function<Vec(const Vec&)> apply;
  std::function<Vec(const Vec&)> apply_transpose;
  std::function<Vec(const Vec&)> solve;
  std::function<Vec(const Vec&)> solve_transpose;
};

struct ConditionEstimate {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double kappa = 0.0;
};

/// Randomized power iteration on A^T A (largest singular value) and on
/// A^{-1} A^{-T} (smallest). Each probe starts from a Gaussian vector; a probe
/// stops early once consecutive estimates agree to rel_target / 10. The
/// largest estimate over probes is kept for both extremes.
ConditionEstimate estimate_condition(const OperatorView& op, int iterations,
                                     int probes, CounterRng& rng,
                                     double rel_target = 1e-2);

}  // namespace symplectic
