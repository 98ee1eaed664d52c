#pragma once

// Global history-state formulation of a linear one-step recursion.
//
//   L = sum_m |m><m| (x) I - sum_{m=1}^{M} |m><m-1| (x) R
//                          - sum_{m=M+1}^{M+r} |m><m-1| (x) I
//
// The unknown is the concatenation (x_0, ..., x_M, x_M, ..., x_M) and the
// right-hand side is (x_0, 0, ..., 0). L is unit block lower-bidiagonal, so
// the system is solved exactly by forward substitution.

#include <memory>
#include <string>

#include "symplectic/linalg.hpp"
#include "symplectic/rkg.hpp"

namespace symplectic {

class BlockHistorySystem {
 public:
  BlockHistorySystem(std::shared_ptr<const Mat> r, Vec x0, Index steps,
                     Index padding);

  Index steps() const noexcept { return steps_; }
  Index padding() const noexcept { return padding_; }
  Index block_dim() const noexcept { return r_->rows(); }
  Index blocks() const noexcept { return steps_ + padding_ + 1; }
  Index total_dim() const noexcept { return blocks() * block_dim(); }
  const Mat& step_matrix() const noexcept { return *r_; }
  const Vec& rhs() const noexcept { return rhs_; }

  /// Sparse L with exact zeros of R dropped.
  SpMat matrix() const;
  /// blocks * block_dim + steps * nnz(R) + padding * block_dim
  Index expected_nnz() const;

  Vec apply(const Vec& v) const;
  Vec apply_transpose(const Vec& v) const;
  /// L^{-1} v and L^{-T} v by block substitution.
  Vec solve_with(const Vec& v) const;
  Vec solve_transpose_with(const Vec& v) const;

 private:
  std::shared_ptr<const Mat> r_;
  Vec rhs_;
  Index steps_;
  Index padding_;
};

BlockHistorySystem assemble(const StepOperator& step, const Vec& x0,
                            Index steps, Index padding);
BlockHistorySystem assemble(const Mat& r, const Vec& x0, Index steps,
                            Index padding);

struct HistorySolution {
  Vec history;
  Vec final_state;
  Index block_dim = 0;
  double kappa_L_estimate = 0.0;  // filled by solve() only on request
  double residual = 0.0;          // ||L h - b||_2

  Vec block(Index m) const { return history.segment(m * block_dim, block_dim); }
};

struct SolveOptions {
  bool estimate_kappa = false;
  std::uint64_t seed = 0;
};

/// Forward substitution. Throws DivergenceError when a block norm exceeds
/// 1e300.
HistorySolution solve(const BlockHistorySystem& sys,
                      const SolveOptions& opts = {});

enum class ConditionMethod { exact, estimate, automatic };

struct HistoryCondition {
  double kappa = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  bool exact = false;
};

/// Exact SVD requires total_dim <= 4000 (CapabilityError otherwise);
/// estimate runs 20 power iterations with 3 probes at a 1e-2 relative
/// target. automatic chooses exact when allowed.
HistoryCondition condition_number(const BlockHistorySystem& sys,
                                  ConditionMethod method, CounterRng& rng);

constexpr Index kExactHistoryLimit = 4000;

/// ||L^{-1}||_2 <= sum_{j=0}^{M+r} ||P^j||, where P is the strictly lower
/// block part of -L. Every block row of P^j holds a single power R^k, so the
/// bound is sum_j max_k ||R^k|| over the powers that occur. For r = 0 this
/// is 1 + sum_{j=1}^{M} ||R^j||.
double nilpotent_series_bound(const BlockHistorySystem& sys);

struct ComplexityReport {
  double kappa_v = 0.0;
  double horizon = 0.0;
  double norm_k = 0.0;
  double eps = 0.0;
  double linear_queries = 0.0;     // T ||K|| kappa_V^2
  double linear_queries_log = 0.0; // times log(1/eps)
  double nonlinear_exponent = 0.0; // 2 log kappa_V
  double nonlinear_queries = 0.0;  // T^{1 + 2 log kV} / eps^{2 log kV}
  double kappa_L = 0.0;
  bool kappa_L_exact = false;
  double kappa_L_over_m = 0.0;
  double final_block_probability = 0.0;
};

ComplexityReport complexity_report(const BlockHistorySystem& sys,
                                   double kappa_v, double horizon,
                                   double norm_k, double eps,
                                   CounterRng& rng);

}  // namespace symplectic
