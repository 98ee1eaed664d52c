#include <cmath>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "symplectic/diagnostics.hpp"
#include "symplectic/errors.hpp"
#include "symplectic/experiments.hpp"

using namespace symplectic;

TEST_SUITE("diagnostics") {

TEST_CASE("spectral report: rotation, shear, random stable") {
  Mat rot(2, 2);
  rot << 0.0, 1.0, -1.0, 0.0;
  const auto r = spectral_report(rot);
  CHECK(r.stable);
  CHECK_FALSE(r.defective);
  CHECK(r.kappa_v == doctest::Approx(1.0));
  for (Index i = 0; i < 2; ++i) {
    CHECK(std::abs(std::abs(r.eigenvalues[i].imag()) - 1.0) < 1e-14);
  }

  Mat shear(2, 2);
  shear << 0.0, 1.0, 0.0, 0.0;
  const auto s = spectral_report(shear);
  CHECK(s.defective);
  CHECK_FALSE(s.stable);
  CHECK(std::isinf(s.kappa_v));

  CounterRng rng(6, 0);
  for (int i = 0; i < 10; ++i) {
    const auto rep = spectral_report(random_stable_generator(1 + i % 4, rng));
    CHECK(rep.stable);
    CHECK(rep.max_real_part < 1e-8);
  }
}

TEST_CASE("stable flag agrees with bounded propagators") {
  CounterRng rng(7, 0);
  for (int i = 0; i < 5; ++i) {
    const Mat k = random_stable_generator(2, rng);
    const auto rep = spectral_report(k);
    for (double t : {1.0, 10.0, 100.0}) {
      CHECK(spectral_norm(Mat((t * k).exp())) <= rep.kappa_v * (1.0 + 1e-8));
    }
  }
  Mat saddle(2, 2);
  saddle << 0.2, 0.0, 0.0, -0.2;
  const auto rep = spectral_report(saddle);
  CHECK_FALSE(rep.stable);
  CHECK(spectral_norm(Mat((100.0 * saddle).exp())) > rep.kappa_v);
}

TEST_CASE("symplectic defect") {
  CHECK(symplectic_defect(Mat::Identity(4, 4)) == 0.0);
  CHECK(symplectic_defect(canonical_j(2)) == 0.0);
  CHECK(symplectic_defect(2.0 * Mat::Identity(2, 2)) == doctest::Approx(3.0));
  CHECK_THROWS_AS(symplectic_defect(Mat::Identity(3, 3)), ShapeError);

  CounterRng rng(3, 3);
  for (int i = 0; i < 10; ++i) {
    const Mat k = random_stable_generator(2, rng);
    const double tau = 0.3 / spectral_norm(k);
    const Mat a = build_step_operator(gauss_tableau(2), k, tau).r;
    const Mat b = build_step_operator(gauss_tableau(3), k, 0.7 * tau).r;
    const double delta = std::max(symplectic_defect(a), symplectic_defect(b));
    CHECK(symplectic_defect(a * b) <=
          std::max(1e-14, 4.0 * delta * spectral_norm(a) * spectral_norm(b)));
  }
}

TEST_CASE("linear fit and order fit") {
  std::vector<double> x{0.0, 1.0, 2.0, 3.0};
  std::vector<double> y{1.0, 3.0, 5.0, 7.0};
  const auto fit = linear_fit(x, y);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.residual_sigma < 1e-14);

  const std::vector<double> steps{0.1, 0.05, 0.025, 0.0125};
  for (double order : {1.0, 2.0, 4.5}) {
    std::vector<double> errs;
    for (double h : steps) errs.push_back(3.0 * std::pow(h, order));
    CHECK(std::abs(order_fit(errs, steps) - order) < 1e-12);
  }
  CHECK_THROWS_AS(order_fit({1.0, 0.0, 2.0}, {1.0, 2.0, 3.0}), DegenerateFitError);
  CHECK_THROWS_AS(order_fit({1.0, 2.0}, {1.0, 2.0}), DegenerateFitError);
}

TEST_CASE("energy drift series") {
  const QuadraticHamiltonian h(0.5 * Mat::Identity(2, 2));
  Trajectory flat;
  flat.tau = 0.1;
  for (Index n = 0; n < 5; ++n) flat.record(n, Vec::Unit(2, 0));
  const auto d = energy_drift(HamiltonianSystem{h}, flat);
  CHECK(d.max_drift == 0.0);
  CHECK(d.trend.slope == 0.0);
  CHECK(d.trend_within(3.0));

  const auto fpu = make_fpu_chain(4, 1.0, 0.25, 1.0);
  const auto traj = integrate_rk4(HamiltonianSystem{fpu}, carleman_default_state(8),
                                  0.05, 20000, 100);
  CHECK(energy_drift(HamiltonianSystem{fpu}, traj).trend.slope > 0.0);
}

}  // TEST_SUITE
