#include "symplectic/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "symplectic/errors.hpp"

namespace symplectic {

namespace {

constexpr Index kExactNormLimit = 400;

template <typename Apply, typename ApplyT>
double power_norm(Index n, Apply apply, ApplyT apply_t, int max_iter,
                  double tol) {
  if (n == 0) return 0.0;
  CounterRng rng(0x5eedULL);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * rng.normal();
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = apply_t(apply(v));
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (it > 0 && std::abs(next - est) <= tol * next) return next;
    est = next;
  }
  return est;
}

}  // namespace

Mat canonical_j(Index d) {
  Mat j = Mat::Zero(2 * d, 2 * d);
  j.topRightCorner(d, d).setIdentity();
  j.bottomLeftCorner(d, d) = -Mat::Identity(d, d);
  return j;
}

SpMat kron_sandwich(Index left, const SpMat& f, Index right) {
  const Index rows = left * f.rows() * right;
  const Index cols = left * f.cols() * right;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(left * right * f.nonZeros()));
  for (Index u = 0; u < left; ++u) {
    for (Index k = 0; k < f.outerSize(); ++k) {
      for (SpMat::InnerIterator it(f, k); it; ++it) {
        const Index r0 = (u * f.rows() + it.row()) * right;
        const Index c0 = (u * f.cols() + it.col()) * right;
        for (Index w = 0; w < right; ++w) {
          trips.emplace_back(r0 + w, c0 + w, it.value());
        }
      }
    }
  }
  SpMat out(rows, cols);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SpMat to_sparse(const Mat& a) {
  std::vector<Eigen::Triplet<double>> trips;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, j) != 0.0) trips.emplace_back(i, j, a(i, j));
    }
  }
  SpMat out(a.rows(), a.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

double norm1(const Mat& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

double norm1(const SpMat& a) {
  double best = 0.0;
  for (Index k = 0; k < a.outerSize(); ++k) {
    double s = 0.0;
    for (SpMat::InnerIterator it(a, k); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  if (!a.IsRowMajor) return best;
  return norm1(Mat(a));
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= kExactNormLimit) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
  }
  return power_norm(
      a.cols(), [&](const Vec& v) -> Vec { return a * v; },
      [&](const Vec& v) -> Vec { return a.transpose() * v; }, 2000, 1e-12);
}

double spectral_norm(const SpMat& a) {
  if (a.size() == 0) return 0.0;
  if (std::max(a.rows(), a.cols()) <= kExactNormLimit) {
    return spectral_norm(Mat(a));
  }
  const SpMat at = a.transpose();
  return power_norm(
      a.cols(), [&](const Vec& v) -> Vec { return a * v; },
      [&](const Vec& v) -> Vec { return at * v; }, 2000, 1e-12);
}

double condition_number(const Mat& a) {
  if (a.rows() != a.cols()) throw ShapeError("condition_number: matrix not square");
  Eigen::BDCSVD<Mat> svd(a);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

ConditionEstimate estimate_condition(const OperatorView& op, int iterations,
                                     int probes, CounterRng& rng,
                                     double rel_target) {
  if (op.dim <= 0) throw ShapeError("estimate_condition: empty operator");
  auto extreme = [&](const std::function<Vec(const Vec&)>& fwd,
                     const std::function<Vec(const Vec&)>& bwd) {
    double best = 0.0;
    for (int probe = 0; probe < probes; ++probe) {
      Vec v(op.dim);
      for (Index i = 0; i < op.dim; ++i) v[i] = rng.normal();
      v.normalize();
      double est = 0.0;
      for (int it = 0; it < iterations; ++it) {
        Vec w = bwd(fwd(v));
        const double nw = w.norm();
        if (!std::isfinite(nw) || nw == 0.0) break;
        const double next = std::sqrt(nw);
        v = w / nw;
        const bool settled =
            it > 0 && std::abs(next - est) <= 0.1 * rel_target * next;
        est = next;
        if (settled) break;
      }
      best = std::max(best, est);
    }
    return best;
  };
  ConditionEstimate out;
  out.sigma_max = extreme(op.apply, op.apply_transpose);
  const double inv_norm = extreme(op.solve, op.solve_transpose);
  out.sigma_min = inv_norm > 0.0 ? 1.0 / inv_norm : 0.0;
  out.kappa = out.sigma_max * inv_norm;
  return out;
}

}  // namespace symplectic
