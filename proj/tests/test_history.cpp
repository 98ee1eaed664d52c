#include <cmath>
#include <memory>

#include <doctest.h>

#include "symplectic/errors.hpp"
#include "symplectic/experiments.hpp"
#include "symplectic/history.hpp"

using namespace symplectic;

namespace {

Mat rotation_generator() {
  Mat k(2, 2);
  k << 0.0, 1.0, -1.0, 0.0;
  return k;
}

}  // namespace

TEST_SUITE("history") {

TEST_CASE("smallest system") {
  const auto step = build_step_operator(gauss_tableau(1), rotation_generator(), 0.1);
  const auto sys = assemble(step, Vec::Unit(2, 0), 1, 0);
  const Mat l = Mat(sys.matrix());
  Mat expected = Mat::Identity(4, 4);
  expected.block(2, 0, 2, 2) = -step.r;
  CHECK((l - expected).norm() == 0.0);
  CHECK(sys.rhs().head(2) == Vec::Unit(2, 0));
  CHECK(sys.rhs().tail(2).norm() == 0.0);
}

TEST_CASE("padded subdiagonal") {
  const auto step = build_step_operator(gauss_tableau(2), rotation_generator(), 0.1);
  const auto sys = assemble(step, Vec::Unit(2, 1), 2, 1);
  const Mat l = Mat(sys.matrix());
  CHECK(sys.blocks() == 4);
  CHECK((l.block(2, 0, 2, 2) + step.r).norm() == 0.0);
  CHECK((l.block(4, 2, 2, 2) + step.r).norm() == 0.0);
  CHECK((l.block(6, 4, 2, 2) + Mat::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("sparsity count") {
  const auto chain = make_harmonic_chain(3, 1.0, 1.0);
  const auto step = build_step_operator(gauss_tableau(2), chain.generator(), 0.1);
  for (Index m : {1, 5, 17}) {
    for (Index r : {0, 1, 9}) {
      const auto sys = assemble(step, Vec::Ones(6), m, r);
      const Index nnz_r = (step.r.array() != 0.0).count();
      CHECK(sys.matrix().nonZeros() == (m + r + 1) * 6 + m * nnz_r + r * 6);
      CHECK(sys.expected_nnz() == sys.matrix().nonZeros());
    }
  }
}

TEST_CASE("assembly errors") {
  const auto step = build_step_operator(gauss_tableau(1), rotation_generator(), 0.1);
  CHECK_THROWS_AS(assemble(step, Vec::Ones(3), 4, 0), ShapeError);
  CHECK_THROWS_AS(assemble(step, Vec::Ones(2), 0, 0), ParameterDomainError);
  CHECK_THROWS_AS(assemble(step, Vec::Ones(2), 4, -1), ParameterDomainError);
}

TEST_CASE("solve: constant dynamics, sequential agreement, padded blocks") {
  const Vec x0 = Vec::LinSpaced(4, -1.0, 2.0);
  const auto ident = assemble(Mat::Identity(4, 4), x0, 6, 2);
  const auto flat = solve(ident);
  for (Index m = 0; m < ident.blocks(); ++m) CHECK((flat.block(m) - x0).norm() == 0.0);

  const auto step = build_step_operator(gauss_tableau(2), rotation_generator(), 0.1);
  const Vec y0 = Vec::Unit(2, 0);
  const auto sys = assemble(step, y0, 100, 25);
  const auto sol = solve(sys);
  const Vec seq = integrate_linear(step, y0, 100, 100).final_state();
  CHECK((sol.block(100) - seq).norm() <= 1e-12);
  CHECK((sol.final_state - seq).norm() <= 1e-12);
  for (Index m = 101; m < sys.blocks(); ++m) {
    CHECK((sol.block(m) - sol.block(100)).norm() <= 1e-12);
  }
  CHECK(sol.residual <= 1e-10 * sys.rhs().norm());
}

TEST_CASE("apply and transpose are consistent with the assembled matrix") {
  CounterRng rng(4, 0);
  const Mat k = random_stable_generator(2, rng);
  const auto step = build_step_operator(gauss_tableau(3), k, 0.3 / spectral_norm(k));
  const auto sys = assemble(step, Vec::Ones(4), 12, 3);
  const SpMat l = sys.matrix();
  Vec v(sys.total_dim());
  for (Index i = 0; i < v.size(); ++i) v[i] = rng.normal();
  CHECK((sys.apply(v) - l * v).norm() < 1e-12 * v.norm());
  CHECK((sys.apply_transpose(v) - l.transpose() * v).norm() < 1e-12 * v.norm());
  CHECK((l * sys.solve_with(v) - v).norm() < 1e-10 * v.norm());
  CHECK((l.transpose() * sys.solve_transpose_with(v) - v).norm() < 1e-10 * v.norm());
}

TEST_CASE("divergence is reported") {
  const auto sys = assemble(Mat::Identity(2, 2) * 1e20, Vec::Ones(2), 20, 0);
  CHECK_THROWS_AS(solve(sys), DivergenceError);
}

TEST_CASE("condition number: identity, growth in M, padding") {
  CounterRng rng(0, 0);
  const BlockHistorySystem degenerate(std::make_shared<const Mat>(rotation_generator()),
                                      Vec::Ones(2), 0, 0);
  CHECK(condition_number(degenerate, ConditionMethod::exact, rng).kappa ==
        doctest::Approx(1.0));
  const auto ident = assemble(Mat::Zero(2, 2), Vec::Ones(2), 1, 0);
  CHECK(condition_number(ident, ConditionMethod::exact, rng).kappa ==
        doctest::Approx(1.0));

  const auto step = build_step_operator(gauss_tableau(1), rotation_generator(), 0.1);
  std::vector<double> ms;
  std::vector<double> logk;
  std::vector<double> kappa;
  for (Index m : {10, 20, 40, 80}) {
    const double k = condition_number(assemble(step, Vec::Unit(2, 0), m, 0),
                                      ConditionMethod::exact, rng).kappa;
    ms.push_back(std::log(static_cast<double>(m)));
    logk.push_back(std::log(k));
    kappa.push_back(k);
  }
  CHECK(linear_fit(ms, logk).slope <= 1.2);

  // padded system: kappa ratio grows no faster than (M + r) / M
  const double base = kappa[1];
  double worst = 0.0;
  for (Index r : {5, 20, 80}) {
    const double kp = condition_number(assemble(step, Vec::Unit(2, 0), 20, r),
                                       ConditionMethod::exact, rng).kappa;
    worst = std::max(worst, (kp / base) / ((20.0 + r) / 20.0));
  }
  CHECK(worst <= 2.0);
}

TEST_CASE("condition estimate tracks the exact value") {
  CounterRng rng(9, 0);
  const auto step = build_step_operator(gauss_tableau(2), rotation_generator(), 0.2);
  const auto sys = assemble(step, Vec::Unit(2, 0), 60, 0);
  const double exact = condition_number(sys, ConditionMethod::exact, rng).kappa;
  const auto est = condition_number(sys, ConditionMethod::estimate, rng);
  CHECK_FALSE(est.exact);
  CHECK(est.kappa == doctest::Approx(exact).epsilon(0.05));

  const auto big = assemble(Mat::Identity(50, 50), Vec::Ones(50), 100, 0);
  CHECK_THROWS_AS(condition_number(big, ConditionMethod::exact, rng), CapabilityError);
}

TEST_CASE("nilpotent series bounds the inverse") {
  CounterRng rng(2, 0);
  for (int i = 0; i < 6; ++i) {
    const Mat k = random_stable_generator(1 + i % 2, rng);
    const auto step = build_step_operator(gauss_tableau(2), k, 0.4 / spectral_norm(k));
    const auto sys = assemble(step, Vec::Ones(k.rows()), 15, i * 3);
    const auto cond = condition_number(sys, ConditionMethod::exact, rng);
    CHECK(1.0 / cond.sigma_min <= nilpotent_series_bound(sys) * (1.0 + 1e-12));
  }
  const auto unpadded = assemble(Mat::Identity(2, 2), Vec::Ones(2), 7, 0);
  CHECK(nilpotent_series_bound(unpadded) == doctest::Approx(8.0));
}

TEST_CASE("complexity report") {
  CounterRng rng(0, 0);
  const auto step = build_step_operator(gauss_tableau(1), rotation_generator(), 0.1);
  const auto sys = assemble(step, Vec::Unit(2, 0), 10, 10);
  const auto unit = complexity_report(sys, 1.0, 1.0, 1.0, 1e-3, rng);
  CHECK(unit.linear_queries == doctest::Approx(1.0));
  CHECK(unit.nonlinear_exponent == 0.0);
  const auto doubled = complexity_report(sys, 1.0, 2.0, 1.0, 1e-3, rng);
  CHECK(doubled.linear_queries == doctest::Approx(2.0 * unit.linear_queries));
  const auto nl = complexity_report(sys, 2.0, 1.0, 1.0, 1e-3, rng);
  const double e = 2.0 * std::log(2.0);
  CHECK(nl.nonlinear_exponent == doctest::Approx(e));
  CHECK(nl.nonlinear_queries == doctest::Approx(std::pow(1e-3, -e)));
  CHECK(nl.final_block_probability == doctest::Approx(11.0 / 21.0).epsilon(1e-10));
  CHECK_THROWS_AS(complexity_report(sys, 0.5, 1.0, 1.0, 1e-3, rng),
                  ParameterDomainError);
}

}  // TEST_SUITE
