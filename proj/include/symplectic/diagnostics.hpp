#pragma once

// Measurement tools shared by the verification suites: eigenstructure
// reports, symplecticity defects, energy-drift series and convergence-order
// fits.

#include <limits>
#include <vector>

#include "symplectic/linalg.hpp"
#include "symplectic/models.hpp"
#include "symplectic/rkg.hpp"

namespace symplectic {

struct SpectralReport {
  CVec eigenvalues;
  CMat eigenvectors;  // unit 2-norm columns
  double kappa_v = std::numeric_limits<double>::infinity();   // 2-norm
  double kappa1_v = std::numeric_limits<double>::infinity();  // 1-norm
  double max_real_part = 0.0;  // max |Re lambda|
  bool stable = false;
  bool defective = false;
};

/// kappa(V) > 1e12 is treated as defective: both condition numbers are set to
/// infinity and the report is flagged unstable.
SpectralReport spectral_report(const Mat& k);

constexpr double kDefectiveThreshold = 1e12;

/// ||S^T J S - J||_2 for a 2d x 2d matrix.
double symplectic_defect(const Mat& s);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_sigma = 0.0;  // sample standard deviation of residuals
};

/// Ordinary least squares y ~ slope * x + intercept.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct DriftSeries {
  std::vector<double> times;
  std::vector<double> energy;
  std::vector<double> relative_drift;  // |H(t) - H(0)| / |H(0)|
  double max_drift = 0.0;
  LinearFit trend;  // relative_drift against t over the full series

  /// |slope| * (t_end - t_0) <= nsigma * residual sigma
  bool trend_within(double nsigma) const;
};

/// When H(0) is exactly zero the absolute drift is reported instead.
DriftSeries energy_drift(const HamiltonianSystem& system,
                         const Trajectory& trajectory);

/// Least-squares slope of log(error) against log(step). Throws
/// DegenerateFitError for fewer than 3 pairs or non-positive entries.
double order_fit(const std::vector<double>& errors,
                 const std::vector<double>& steps);

}  // namespace symplectic
