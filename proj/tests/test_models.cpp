#include <cmath>

#include <doctest.h>

#include "symplectic/diagnostics.hpp"
#include "symplectic/errors.hpp"
#include "symplectic/models.hpp"
#include "symplectic/rng.hpp"

using namespace symplectic;

namespace {

Vec random_state(Index n, CounterRng& rng, double scale = 1.0) {
  Vec x(n);
  for (Index i = 0; i < n; ++i) x[i] = scale * rng.uniform(-1.0, 1.0);
  return x;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("single oscillator") {
  const auto h = make_harmonic_chain(1, 1.0, 1.0, Boundary::fixed_free);
  CHECK((h.q() - 0.5 * Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
  Mat k(2, 2);
  k << 0.0, 1.0, -1.0, 0.0;
  CHECK((h.generator() - k).norm() == doctest::Approx(0.0));
}

TEST_CASE("two-particle chain has imaginary spectrum") {
  const auto h = make_harmonic_chain(2, 1.0, 1.0);
  const Eigen::EigenSolver<Mat> es(h.generator());
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::abs(es.eigenvalues()[i].real()) < 1e-12);
    CHECK(std::abs(es.eigenvalues()[i].imag()) > 0.5);
  }
}

TEST_CASE("stiff oscillator has period pi") {
  const auto h = make_harmonic_chain(1, 4.0, 1.0, Boundary::fixed_free);
  const Eigen::EigenSolver<Mat> es(h.generator());
  CHECK(std::abs(es.eigenvalues()[0].imag()) == doctest::Approx(2.0));
}

TEST_CASE("JK is symmetric for quadratic systems") {
  for (Index l : {1, 3, 6}) {
    for (auto b : {Boundary::fixed, Boundary::fixed_free, Boundary::free}) {
      const auto h = make_harmonic_chain(l, 1.3, 0.7, b);
      const Mat jk = canonical_j(h.dof()) * h.generator();
      CHECK((jk - jk.transpose()).norm() == 0.0);
      const Mat k = h.generator();
      CHECK((k.transpose() * canonical_j(h.dof()) + jk).norm() < 1e-14);
    }
  }
}

TEST_CASE("energy is homogeneous of degree two") {
  CounterRng rng(3, 0);
  const auto h = make_harmonic_chain(4, 1.0, 2.0);
  const Vec x = random_state(h.dim(), rng);
  for (double c : {-2.0, 0.5, 3.0}) {
    CHECK(h.energy(c * x) == doctest::Approx(c * c * h.energy(x)).epsilon(1e-14));
  }
  CHECK(QuadraticHamiltonian(0.5 * Mat::Identity(2, 2)).energy(Vec::Unit(2, 0)) ==
        doctest::Approx(0.5));
}

TEST_CASE("parameter and shape errors") {
  CHECK_THROWS_AS(make_harmonic_chain(0, 1.0, 1.0), ParameterDomainError);
  CHECK_THROWS_AS(make_harmonic_chain(2, -1.0, 1.0), ParameterDomainError);
  CHECK_THROWS_AS(make_harmonic_chain(2, 1.0, 0.0), ParameterDomainError);
  CHECK_THROWS_AS(make_fpu_chain(1, 1.0, 0.1, 1.0), ParameterDomainError);
  CHECK_THROWS_AS(QuadraticHamiltonian(Mat::Identity(3, 3)), ShapeError);
  Mat asym = Mat::Identity(2, 2);
  asym(0, 1) = 1.0;
  CHECK_THROWS_AS(QuadraticHamiltonian{asym}, ParameterDomainError);
  const auto h = make_harmonic_chain(2, 1.0, 1.0);
  CHECK_THROWS_AS(evaluate_energy(h, Vec::Zero(3)), ShapeError);
}

TEST_CASE("fpu with alpha = 0 matches the harmonic chain") {
  for (auto b : {Boundary::fixed, Boundary::free}) {
    const auto fpu = make_fpu_chain(5, 1.2, 0.0, 0.8, b);
    const auto harm = make_harmonic_chain(5, 1.2, 0.8, b);
    CHECK((fpu.q() - harm.q()).norm() == 0.0);
    CHECK(fpu.c().is_zero());
    CounterRng rng(1, 1);
    const Vec x = random_state(fpu.dim(), rng);
    CHECK(fpu.energy(x) == doctest::Approx(harm.energy(x)).epsilon(1e-15));
  }
}

TEST_CASE("fpu spot value") {
  const auto h = make_fpu_chain(2, 1.0, 0.1, 1.0, Boundary::free);
  Vec x(4);
  x << 0.1, 0.2, 0.0, 0.0;
  const double expected = 0.5 * 0.01 + (0.1 / 3.0) * 0.001;
  CHECK(h.energy(x) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(evaluate_energy(HamiltonianSystem{h}, x) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("cubic tensor is fully symmetric") {
  const auto h = make_fpu_chain(4, 1.0, 0.25, 1.0);
  const auto& c = h.c();
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      for (Index k = 0; k < 4; ++k) {
        CHECK(c(i, j, k) == c(k, j, i));
        CHECK(c(i, j, k) == c(j, i, k));
      }
    }
  }
  CHECK_THROWS_AS(CubicTensor(2, {{0, 1, 1, 1.0}, {1, 0, 1, 2.0}}),
                  ParameterDomainError);
}

TEST_CASE("cubic field matches the central-difference gradient") {
  CounterRng rng(11, 0);
  const auto h = make_fpu_chain(4, 1.0, 0.25, 1.0);
  const Mat j = canonical_j(h.dof());
  double worst = 0.0;
  double fd_worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Vec x = random_state(h.dim(), rng, 0.5);
    const Vec jf = j.transpose() * h.field()(x);
    Vec fd(h.dim());
    const double step = 1e-5;
    for (Index i = 0; i < h.dim(); ++i) {
      Vec e = Vec::Zero(h.dim());
      e[i] = step;
      fd[i] = (h.energy(x + e) - h.energy(x - e)) / (2.0 * step);
    }
    worst = std::max(worst, (jf - h.gradient(x)).norm());
    fd_worst = std::max(fd_worst, (fd - h.gradient(x)).norm());
  }
  CHECK(worst < 1e-10);
  CHECK(fd_worst < 1e-8);
}

TEST_CASE("lennard-jones pair function") {
  const double rmin = std::pow(2.0, 1.0 / 6.0);
  CHECK(std::abs(lj_pair_force(rmin, 1.0, 1.0)) < 1e-12);
  CHECK(std::abs(lj_pair_potential(1.0, 1.0, 1.0)) < 1e-15);
  const double r = 1.3;
  const double h = 1e-6;
  const double fd = -(lj_pair_potential(r + h, 1.0, 1.0) -
                      lj_pair_potential(r - h, 1.0, 1.0)) / (2.0 * h);
  CHECK(lj_pair_force(r, 1.0, 1.0) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("lennard-jones system") {
  LennardJonesParams prm;
  prm.particles = 16;
  prm.box = 8.0;
  const auto sys = make_lennard_jones(prm);
  const Vec q = lj_lattice_positions(prm);
  CHECK(q.size() == 32);
  CounterRng rng(5, 0);
  Vec dq(q.size());
  for (Index i = 0; i < q.size(); ++i) dq[i] = 1e-3 * rng.normal();
  const Vec f = sys.force(q);
  const double step = 1e-6;
  const double fd = -(sys.potential(q + step * dq) - sys.potential(q - step * dq)) /
                    (2.0 * step);
  CHECK(f.dot(dq) == doctest::Approx(fd).epsilon(1e-5));

  Vec bad = q;
  bad[2] = bad[0] + 0.1;
  bad[3] = bad[1];
  CHECK_THROWS_AS(sys.force(bad), IllConditionedConfigurationError);
  prm.box = 4.0;
  CHECK_THROWS_AS(make_lennard_jones(prm), ParameterDomainError);

  // two particles straddling the cutoff: energy and force continuous
  prm.particles = 2;
  prm.box = 8.0;
  prm.spatial_dim = 1;
  const auto pair = make_lennard_jones(prm);
  for (double d : {1e-6, 1e-9}) {
    Vec in(2);
    in << 0.0, 2.5 - d;
    Vec out(2);
    out << 0.0, 2.5 + d;
    CHECK(std::abs(pair.potential(in) - pair.potential(out)) < d);
    CHECK((pair.force(in) - pair.force(out)).norm() < d);
    CHECK(pair.potential(out) == 0.0);
  }
}

TEST_CASE("separable view of quadratic chains") {
  const auto h = make_harmonic_chain(3, 1.0, 2.0);
  const auto sep = as_separable(h);
  CounterRng rng(2, 2);
  const Vec x = random_state(h.dim(), rng);
  CHECK(sep.energy(x) == doctest::Approx(h.energy(x)).epsilon(1e-14));
  CHECK((sep.field(x) - h.generator() * x).norm() < 1e-13);
  Mat coupled = Mat::Identity(2, 2);
  coupled(0, 1) = coupled(1, 0) = 0.3;
  CHECK_THROWS_AS(as_separable(QuadraticHamiltonian(coupled)),
                  UnsupportedSystemError);
}

}  // TEST_SUITE
