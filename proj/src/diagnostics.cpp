#include "symplectic/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "symplectic/errors.hpp"

namespace symplectic {

namespace {

double cnorm1(const CMat& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

SpectralReport spectral_report(const Mat& k) {
  if (k.rows() != k.cols() || k.rows() == 0) {
    throw ShapeError("spectral_report: matrix must be square and nonempty");
  }
  if (k.rows() > 4000) {
    throw CapabilityError("spectral_report: dimension above 4000");
  }
  Eigen::EigenSolver<Mat> es(k, true);
  if (es.info() != Eigen::Success) {
    throw ConvergenceError("spectral_report: eigen-solver failed", 0.0);
  }
  SpectralReport rep;
  rep.eigenvalues = es.eigenvalues();
  rep.eigenvectors = es.eigenvectors();
  for (Index j = 0; j < rep.eigenvectors.cols(); ++j) {
    rep.eigenvectors.col(j).normalize();
  }
  rep.max_real_part = rep.eigenvalues.real().cwiseAbs().maxCoeff();

  Eigen::BDCSVD<CMat> svd(rep.eigenvectors);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  const double kappa = smin > 0.0 ? s(0) / smin
                                  : std::numeric_limits<double>::infinity();
  if (!(kappa <= kDefectiveThreshold)) {
    rep.defective = true;
    rep.stable = false;
    return rep;
  }
  rep.kappa_v = kappa;
  const CMat vinv = rep.eigenvectors.inverse();
  rep.kappa1_v = cnorm1(rep.eigenvectors) * cnorm1(vinv);
  rep.stable = rep.max_real_part <= 1e-8;
  return rep;
}

double symplectic_defect(const Mat& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) {
    throw ShapeError("symplectic_defect: matrix must be 2d x 2d");
  }
  const Mat j = canonical_j(s.rows() / 2);
  return spectral_norm(Mat(s.transpose() * j * s - j));
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DegenerateFitError("linear_fit: need at least two paired samples");
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DegenerateFitError("linear_fit: abscissae coincide");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual_sigma = x.size() > 2 ? std::sqrt(ss / (m - 2.0)) : 0.0;
  return fit;
}

bool DriftSeries::trend_within(double nsigma) const {
  if (times.size() < 2) return true;
  const double span = times.back() - times.front();
  return std::abs(trend.slope) * span <= nsigma * trend.residual_sigma;
}

DriftSeries energy_drift(const HamiltonianSystem& system,
                         const Trajectory& trajectory) {
  DriftSeries out;
  const std::size_t count = trajectory.size();
  out.times = trajectory.times;
  out.energy.reserve(count);
  out.relative_drift.reserve(count);
  for (const auto& x : trajectory.states) {
    out.energy.push_back(evaluate_energy(system, x));
  }
  if (count == 0) return out;
  const double h0 = out.energy.front();
  const double scale = h0 != 0.0 ? std::abs(h0) : 1.0;
  for (double h : out.energy) {
    const double r = std::abs(h - h0) / scale;
    out.relative_drift.push_back(r);
    out.max_drift = std::max(out.max_drift, r);
  }
  if (count >= 2) out.trend = linear_fit(out.times, out.relative_drift);
  return out;
}

double order_fit(const std::vector<double>& errors,
                 const std::vector<double>& steps) {
  if (errors.size() != steps.size() || errors.size() < 3) {
    throw DegenerateFitError("order_fit: need at least three (step, error) pairs");
  }
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !(steps[i] > 0.0) || !std::isfinite(errors[i])) {
      throw DegenerateFitError("order_fit: errors and steps must be positive");
    }
    lx.push_back(std::log(steps[i]));
    ly.push_back(std::log(errors[i]));
  }
  return linear_fit(lx, ly).slope;
}

}  // namespace symplectic
