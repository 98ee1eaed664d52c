#include "symplectic/rkg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/SparseLU>

#include "symplectic/errors.hpp"

namespace symplectic {

namespace {

constexpr Index kDenseStageLimit = 2000;

// Legendre P_p and its derivative on [-1, 1].
std::pair<double, double> legendre(int p, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (p == 0) return {1.0, 0.0};
  for (int k = 2; k <= p; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = pk;
  }
  const double dp = p * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

double lagrange(const Vec& nodes, Index j, double s) {
  double v = 1.0;
  for (Index m = 0; m < nodes.size(); ++m) {
    if (m != j) v *= (s - nodes[m]) / (nodes[j] - nodes[m]);
  }
  return v;
}

Mat stacked_rhs(const Mat& tk, int p) {
  const Index n = tk.rows();
  Mat rhs(p * n, n);
  for (int i = 0; i < p; ++i) rhs.middleRows(i * n, n) = tk;
  return rhs;
}

Mat combine_stages(const ButcherTableau& tab, const Mat& x, Index n) {
  Mat r = Mat::Identity(n, n);
  for (int i = 0; i < tab.p; ++i) r += tab.b[i] * x.middleRows(i * n, n);
  return r;
}

void check_step_inputs(const ButcherTableau& tab, Index rows, Index cols,
                       double tau) {
  if (rows != cols) throw ShapeError("step operator: K must be square");
  if (tab.p < 1 || tab.a.rows() != tab.p) {
    throw ParameterDomainError("step operator: malformed tableau");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ParameterDomainError("step operator: tau must be positive");
  }
}

void check_tau_norm(double tau_norm) {
  if (!(tau_norm < 1.0)) {
    std::ostringstream os;
    os << "tau*||K|| = " << tau_norm << " is outside the stable regime (< 1)";
    throw StabilityDomainError(os.str(), tau_norm);
  }
}

void fill_bound_metadata(StepOperator& out, int p) {
  out.kappa_g_bound = 2.0 + 2.0 * std::sqrt(static_cast<double>(p));
  out.in_bound_regime =
      out.tau_norm < 1.0 / (2.0 * std::sqrt(static_cast<double>(p)));
}

}  // namespace

double shifted_legendre(int p, double t) {
  return legendre(p, 2.0 * t - 1.0).first;
}

ButcherTableau gauss_tableau(int p) {
  if (p < 1 || p > 16) {
    throw ParameterDomainError("stage count p must be in [1, 16], got " +
                               std::to_string(p));
  }
  Vec x(p);
  Vec w(p);
  for (int i = 0; i < p; ++i) {
    // Largest root first; flipped below so nodes ascend.
    double r = std::cos(std::numbers::pi * (i + 0.75) / (p + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [val, der] = legendre(p, r);
      const double dr = val / der;
      r -= dr;
      if (std::abs(dr) < 1e-16) break;
    }
    const double der = legendre(p, r).second;
    x[p - 1 - i] = r;
    w[p - 1 - i] = 2.0 / ((1.0 - r * r) * der * der);
  }
  ButcherTableau tab;
  tab.p = p;
  tab.c = (x.array() + 1.0) * 0.5;
  tab.b = w * 0.5;
  tab.a.resize(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      double s = 0.0;
      for (int m = 0; m < p; ++m) {
        s += tab.b[m] * lagrange(tab.c, j, tab.c[i] * tab.c[m]);
      }
      tab.a(i, j) = tab.c[i] * s;
    }
  }
  return tab;
}

Complex stability_scalar(const ButcherTableau& tab, Complex z) {
  const int p = tab.p;
  const CMat m = CMat::Identity(p, p) - z * tab.a.cast<Complex>();
  Eigen::PartialPivLU<CMat> lu(m);
  if (!(lu.rcond() > 1e-14)) {
    std::ostringstream os;
    os << "I - zA is singular at z = " << z;
    throw SingularityError(os.str(), z);
  }
  const CVec u = lu.solve(CVec::Ones(p));
  return Complex(1.0) + z * tab.b.cast<Complex>().dot(u);
}

double stage_spectral_radius(const ButcherTableau& tab) {
  Eigen::EigenSolver<Mat> es(tab.a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

StepOperator build_step_operator(const ButcherTableau& tab, const Mat& k,
                                 double tau, const StepOptions& opts) {
  check_step_inputs(tab, k.rows(), k.cols(), tau);
  const Index n = k.rows();
  const int p = tab.p;
  StepOperator out;
  out.tau = tau;
  out.p = p;
  out.tau_norm = tau * spectral_norm(k);
  check_tau_norm(out.tau_norm);
  fill_bound_metadata(out, p);
  if (p * n > kDenseStageLimit) {
    return build_step_operator(tab, to_sparse(k), tau, opts);
  }
  const Mat tk = tau * k;
  Mat g = Mat::Identity(p * n, p * n);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      g.block(i * n, j * n, n, n) -= tab.a(i, j) * tk;
    }
  }
  Eigen::PartialPivLU<Mat> lu(g);
  if (!(lu.rcond() > 1e-14)) {
    throw SingularityError("stage system G is singular");
  }
  out.r = combine_stages(tab, lu.solve(stacked_rhs(tk, p)), n);
  if (opts.compute_kappa) {
    if (p * n <= opts.exact_kappa_limit) {
      out.kappa_g = condition_number(g);
      out.kappa_g_exact = true;
    } else {
      OperatorView view;
      view.dim = p * n;
      view.apply = [&](const Vec& v) -> Vec { return g * v; };
      view.apply_transpose = [&](const Vec& v) -> Vec {
        return g.transpose() * v;
      };
      view.solve = [&](const Vec& v) -> Vec { return lu.solve(v); };
      view.solve_transpose = [&](const Vec& v) -> Vec {
        return lu.transpose().solve(v);
      };
      CounterRng rng(0x6b617070ULL);
      out.kappa_g = estimate_condition(view, 20, 3, rng).kappa;
    }
  }
  return out;
}

StepOperator build_step_operator(const ButcherTableau& tab, const SpMat& k,
                                 double tau, const StepOptions& opts) {
  check_step_inputs(tab, k.rows(), k.cols(), tau);
  const Index n = k.rows();
  const int p = tab.p;
  if (p * n <= kDenseStageLimit) return build_step_operator(tab, Mat(k), tau, opts);
  StepOperator out;
  out.tau = tau;
  out.p = p;
  out.tau_norm = tau * spectral_norm(k);
  check_tau_norm(out.tau_norm);
  fill_bound_metadata(out, p);

  const SpMat tk = tau * k;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(p * n + p * p * tk.nonZeros()));
  for (Index i = 0; i < p * n; ++i) trips.emplace_back(i, i, 1.0);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      if (tab.a(i, j) == 0.0) continue;
      for (Index col = 0; col < tk.outerSize(); ++col) {
        for (SpMat::InnerIterator it(tk, col); it; ++it) {
          trips.emplace_back(i * n + it.row(), j * n + it.col(),
                             -tab.a(i, j) * it.value());
        }
      }
    }
  }
  SpMat g(p * n, p * n);
  g.setFromTriplets(trips.begin(), trips.end());
  g.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(g);
  if (lu.info() != Eigen::Success) {
    throw SingularityError("stage system G is singular: " + lu.lastErrorMessage());
  }
  const Mat tkd = Mat(tk);
  out.r = combine_stages(tab, lu.solve(stacked_rhs(tkd, p)), n);
  if (opts.compute_kappa) {
    const SpMat gt = g.transpose();
    Eigen::SparseLU<SpMat> lut;
    lut.compute(gt);
    if (lut.info() != Eigen::Success) {
      throw SingularityError("stage system G^T is singular");
    }
    OperatorView view;
    view.dim = p * n;
    view.apply = [&](const Vec& v) -> Vec { return g * v; };
    view.apply_transpose = [&](const Vec& v) -> Vec { return gt * v; };
    view.solve = [&](const Vec& v) -> Vec { return lu.solve(v); };
    view.solve_transpose = [&](const Vec& v) -> Vec { return lut.solve(v); };
    CounterRng rng(0x6b617070ULL);
    out.kappa_g = estimate_condition(view, 20, 3, rng).kappa;
  }
  return out;
}

int choose_stage_count(double horizon, double kappa_v, double eps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ParameterDomainError("choose_stage_count: T must be positive");
  }
  if (!(kappa_v >= 1.0) || !std::isfinite(kappa_v)) {
    throw ParameterDomainError("choose_stage_count: kappa_V must be >= 1");
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ParameterDomainError("choose_stage_count: eps must lie in (0, 1)");
  }
  const double lx = std::log(horizon * kappa_v / eps);
  if (lx <= 1.0) return 1;
  const double llx = std::log(lx);
  if (llx <= 1.0 + 1e-12) return 1;
  const double raw = std::ceil(0.5 * lx / llx);
  return static_cast<int>(std::clamp(raw, 1.0, 16.0));
}

}  // namespace symplectic
