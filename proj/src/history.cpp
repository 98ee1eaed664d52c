#include "symplectic/history.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "symplectic/errors.hpp"

namespace symplectic {

namespace {

constexpr double kBlowup = 1e300;

}  // namespace

BlockHistorySystem::BlockHistorySystem(std::shared_ptr<const Mat> r, Vec x0,
                                       Index steps, Index padding)
    : r_(std::move(r)), steps_(steps), padding_(padding) {
  if (!r_ || r_->rows() != r_->cols() || r_->rows() == 0) {
    throw ShapeError("history: step matrix must be square and nonempty");
  }
  if (x0.size() != r_->rows()) {
    throw ShapeError("history: x0 has length " + std::to_string(x0.size()) +
                     " but R is " + std::to_string(r_->rows()) + " x " +
                     std::to_string(r_->cols()));
  }
  if (steps < 0) throw ParameterDomainError("history: M must be >= 0");
  if (padding < 0) throw ParameterDomainError("history: r must be >= 0");
  rhs_ = Vec::Zero(total_dim());
  rhs_.head(block_dim()) = x0;
}

SpMat BlockHistorySystem::matrix() const {
  const Index n = block_dim();
  const Mat& r = *r_;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(expected_nnz()));
  for (Index i = 0; i < total_dim(); ++i) trips.emplace_back(i, i, 1.0);
  for (Index m = 1; m < blocks(); ++m) {
    const Index row0 = m * n;
    const Index col0 = (m - 1) * n;
    if (m <= steps_) {
      for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < n; ++i) {
          if (r(i, j) != 0.0) trips.emplace_back(row0 + i, col0 + j, -r(i, j));
        }
      }
    } else {
      for (Index i = 0; i < n; ++i) trips.emplace_back(row0 + i, col0 + i, -1.0);
    }
  }
  SpMat l(total_dim(), total_dim());
  l.setFromTriplets(trips.begin(), trips.end());
  return l;
}

Index BlockHistorySystem::expected_nnz() const {
  const Index nnz_r = (r_->array() != 0.0).count();
  return blocks() * block_dim() + steps_ * nnz_r + padding_ * block_dim();
}

Vec BlockHistorySystem::apply(const Vec& v) const {
  const Index n = block_dim();
  Vec out = v;
  for (Index m = 1; m < blocks(); ++m) {
    if (m <= steps_) {
      out.segment(m * n, n).noalias() -= (*r_) * v.segment((m - 1) * n, n);
    } else {
      out.segment(m * n, n) -= v.segment((m - 1) * n, n);
    }
  }
  return out;
}

Vec BlockHistorySystem::apply_transpose(const Vec& v) const {
  const Index n = block_dim();
  Vec out = v;
  for (Index m = 1; m < blocks(); ++m) {
    if (m <= steps_) {
      out.segment((m - 1) * n, n).noalias() -=
          r_->transpose() * v.segment(m * n, n);
    } else {
      out.segment((m - 1) * n, n) -= v.segment(m * n, n);
    }
  }
  return out;
}

Vec BlockHistorySystem::solve_with(const Vec& v) const {
  const Index n = block_dim();
  if (v.size() != total_dim()) throw ShapeError("history: rhs length mismatch");
  Vec x = v;
  for (Index m = 1; m < blocks(); ++m) {
    if (m <= steps_) {
      x.segment(m * n, n).noalias() += (*r_) * x.segment((m - 1) * n, n);
    } else {
      x.segment(m * n, n) += x.segment((m - 1) * n, n);
    }
    if (!(x.segment(m * n, n).norm() <= kBlowup)) {
      throw DivergenceError("history: block " + std::to_string(m) +
                            " exceeded 1e300");
    }
  }
  return x;
}

Vec BlockHistorySystem::solve_transpose_with(const Vec& v) const {
  const Index n = block_dim();
  if (v.size() != total_dim()) throw ShapeError("history: rhs length mismatch");
  Vec x = v;
  for (Index m = blocks() - 1; m >= 1; --m) {
    if (m <= steps_) {
      x.segment((m - 1) * n, n).noalias() += r_->transpose() * x.segment(m * n, n);
    } else {
      x.segment((m - 1) * n, n) += x.segment(m * n, n);
    }
    if (!(x.segment((m - 1) * n, n).norm() <= kBlowup)) {
      throw DivergenceError("history: transposed block exceeded 1e300");
    }
  }
  return x;
}

BlockHistorySystem assemble(const StepOperator& step, const Vec& x0,
                            Index steps, Index padding) {
  return assemble(step.r, x0, steps, padding);
}

BlockHistorySystem assemble(const Mat& r, const Vec& x0, Index steps,
                            Index padding) {
  if (steps < 1) throw ParameterDomainError("history: M must be >= 1");
  return BlockHistorySystem(std::make_shared<const Mat>(r), x0, steps, padding);
}

HistorySolution solve(const BlockHistorySystem& sys, const SolveOptions& opts) {
  HistorySolution out;
  out.block_dim = sys.block_dim();
  out.history = sys.solve_with(sys.rhs());
  out.final_state = out.block(sys.blocks() - 1);
  out.residual = (sys.apply(out.history) - sys.rhs()).norm();
  if (opts.estimate_kappa) {
    CounterRng rng(opts.seed, 0x4c);
    out.kappa_L_estimate =
        condition_number(sys, ConditionMethod::estimate, rng).kappa;
  }
  return out;
}

HistoryCondition condition_number(const BlockHistorySystem& sys,
                                  ConditionMethod method, CounterRng& rng) {
  if (method == ConditionMethod::automatic) {
    method = sys.total_dim() <= kExactHistoryLimit ? ConditionMethod::exact
                                                   : ConditionMethod::estimate;
  }
  HistoryCondition out;
  if (method == ConditionMethod::exact) {
    if (sys.total_dim() > kExactHistoryLimit) {
      throw CapabilityError("exact kappa(L) limited to dimension 4000 (got " +
                            std::to_string(sys.total_dim()) +
                            "); use the estimate method");
    }
    Eigen::BDCSVD<Mat> svd(Mat(sys.matrix()));
    const auto& s = svd.singularValues();
    out.sigma_max = s(0);
    out.sigma_min = s(s.size() - 1);
    out.kappa = out.sigma_max / out.sigma_min;
    out.exact = true;
    return out;
  }
  OperatorView view;
  view.dim = sys.total_dim();
  view.apply = [&](const Vec& v) { return sys.apply(v); };
  view.apply_transpose = [&](const Vec& v) { return sys.apply_transpose(v); };
  view.solve = [&](const Vec& v) { return sys.solve_with(v); };
  view.solve_transpose = [&](const Vec& v) {
    return sys.solve_transpose_with(v);
  };
  const auto est = estimate_condition(view, 20, 3, rng, 1e-2);
  out.kappa = est.kappa;
  out.sigma_max = est.sigma_max;
  out.sigma_min = est.sigma_min;
  return out;
}

double nilpotent_series_bound(const BlockHistorySystem& sys) {
  const Index big_m = sys.steps();
  const Index top = sys.blocks() - 1;
  std::vector<double> power_norm(static_cast<std::size_t>(big_m + 1));
  Mat power = Mat::Identity(sys.block_dim(), sys.block_dim());
  power_norm[0] = 1.0;
  for (Index k = 1; k <= big_m; ++k) {
    power = sys.step_matrix() * power;
    power_norm[static_cast<std::size_t>(k)] = spectral_norm(power);
  }
  double bound = 0.0;
  for (Index j = 0; j <= top; ++j) {
    double worst = 0.0;
    for (Index m = j; m <= top; ++m) {
      // R-factors between block m - j and block m
      const Index k = std::max<Index>(0, std::min(m, big_m) - (m - j));
      worst = std::max(worst, power_norm[static_cast<std::size_t>(k)]);
    }
    bound += worst;
  }
  return bound;
}

ComplexityReport complexity_report(const BlockHistorySystem& sys,
                                   double kappa_v, double horizon,
                                   double norm_k, double eps,
                                   CounterRng& rng) {
  if (!(kappa_v >= 1.0) || !(horizon > 0.0) || !(norm_k >= 0.0) ||
      !(eps > 0.0)) {
    throw ParameterDomainError(
        "complexity_report: need kappa_V >= 1, T > 0, ||K|| >= 0, eps > 0");
  }
  ComplexityReport rep;
  rep.kappa_v = kappa_v;
  rep.horizon = horizon;
  rep.norm_k = norm_k;
  rep.eps = eps;
  rep.linear_queries = horizon * norm_k * kappa_v * kappa_v;
  rep.linear_queries_log =
      rep.linear_queries * std::max(1.0, std::log(1.0 / eps));
  rep.nonlinear_exponent = 2.0 * std::log(kappa_v);
  rep.nonlinear_queries = std::pow(horizon, 1.0 + rep.nonlinear_exponent) /
                          std::pow(eps, rep.nonlinear_exponent);
  const auto cond = condition_number(sys, ConditionMethod::automatic, rng);
  rep.kappa_L = cond.kappa;
  rep.kappa_L_exact = cond.exact;
  rep.kappa_L_over_m = cond.kappa / static_cast<double>(sys.steps());
  const auto sol = solve(sys);
  const Index n = sys.block_dim();
  const double total = sol.history.squaredNorm();
  const double tail =
      sol.history.tail((sys.padding() + 1) * n).squaredNorm();
  rep.final_block_probability = total > 0.0 ? tail / total : 0.0;
  return rep;
}

}  // namespace symplectic
