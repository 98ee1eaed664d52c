#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "symplectic/errors.hpp"
#include "symplectic/rkg.hpp"

namespace symplectic {

namespace {

using FieldFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<Mat(const Vec&)>;

struct FieldAccess {
  FieldFn field;
  JacobianFn jacobian;
  bool separable = false;
};

Mat fd_separable_jacobian(const SeparableForceSystem& s, const Vec& x) {
  const Index d = s.d;
  Mat jac = Mat::Zero(2 * d, 2 * d);
  for (Index i = 0; i < d; ++i) jac(i, d + i) = 1.0 / s.masses[i];
  Vec q = x.head(d);
  for (Index j = 0; j < d; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(q[j]));
    const double saved = q[j];
    q[j] = saved + h;
    const Vec fp = s.force(q);
    q[j] = saved - h;
    const Vec fm = s.force(q);
    q[j] = saved;
    jac.block(d, j, d, 1) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

FieldAccess field_access(const HamiltonianSystem& system) {
  FieldAccess out;
  if (const auto* q = std::get_if<QuadraticHamiltonian>(&system)) {
    const Mat k = q->generator();
    out.field = [k](const Vec& x) -> Vec { return k * x; };
    out.jacobian = [k](const Vec&) -> Mat { return k; };
  } else if (const auto* c = std::get_if<CubicHamiltonian>(&system)) {
    const auto h = std::make_shared<CubicHamiltonian>(*c);
    out.field = [h](const Vec& x) -> Vec { return h->field()(x); };
    out.jacobian = [h](const Vec& x) -> Mat { return h->field().jacobian(x); };
  } else {
    const auto s =
        std::make_shared<SeparableForceSystem>(std::get<SeparableForceSystem>(system));
    out.field = [s](const Vec& x) -> Vec { return s->field(x); };
    out.jacobian = [s](const Vec& x) -> Mat { return fd_separable_jacobian(*s, x); };
    out.separable = true;
  }
  return out;
}

void check_run(Index dim, const Vec& x0, double tau, Index steps, Index stride) {
  if (x0.size() != dim) {
    throw ShapeError("initial state has length " + std::to_string(x0.size()) +
                     ", expected " + std::to_string(dim));
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ParameterDomainError("tau must be positive");
  }
  if (steps < 0) throw ParameterDomainError("step count must be nonnegative");
  if (stride < 1) throw ParameterDomainError("record stride must be >= 1");
}

void maybe_record(Trajectory& traj, Index n, Index steps, Index stride,
                  const Vec& x) {
  if (n % stride == 0 || n == steps) traj.record(n, x);
}

void check_finite(const Vec& x, Index n) {
  if (!x.allFinite()) {
    throw DivergenceError("state became non-finite at step " + std::to_string(n));
  }
}

}  // namespace

Trajectory integrate_linear(const StepOperator& step, const Vec& x0,
                            Index steps, Index stride) {
  check_run(step.dim(), x0, step.tau, steps, stride);
  Trajectory traj;
  traj.tau = step.tau;
  traj.steps = steps;
  Vec x = x0;
  traj.record(0, x);
  Vec next(x.size());
  for (Index n = 1; n <= steps; ++n) {
    next.noalias() = step.r * x;
    x.swap(next);
    maybe_record(traj, n, steps, stride, x);
  }
  return traj;
}

Trajectory integrate_linear(const ButcherTableau& tab, const Mat& k,
                            const Vec& x0, double tau, Index steps,
                            Index stride) {
  StepOptions opts;
  opts.compute_kappa = false;
  return integrate_linear(build_step_operator(tab, k, tau, opts), x0, steps,
                          stride);
}

namespace {

Trajectory integrate_collocation(const ButcherTableau& tab,
                                 const FieldAccess& access, Index n,
                                 const Vec& x0, double tau, Index steps,
                                 const NonlinearOptions& opts) {
  check_run(n, x0, tau, steps, opts.stride);
  if (opts.max_iter < 1) throw ParameterDomainError("max_iter must be >= 1");
  if (!(opts.tol > 0.0)) throw ParameterDomainError("tol must be positive");
  StageSolver solver = opts.solver;
  if (solver == StageSolver::automatic) {
    solver = access.separable ? StageSolver::fixed_point : StageSolver::newton;
  }
  const int p = tab.p;
  const Mat at = tab.a.transpose();

  Trajectory traj;
  traj.tau = tau;
  traj.steps = steps;
  Vec x = x0;
  traj.record(0, x);

  Mat z(n, p);       // stage increments, column i is z_i
  Mat f(n, p);       // field at x + z_i
  Mat gmat(p * n, p * n);
  Vec residual(p * n);
  for (Index step = 1; step <= steps; ++step) {
    const double scale = 1.0 + x.cwiseAbs().maxCoeff();
    const Vec f0 = access.field(x);
    for (int i = 0; i < p; ++i) z.col(i) = tau * tab.c[i] * f0;
    double last = 0.0;
    bool converged = false;

    if (solver == StageSolver::fixed_point) {
      for (int it = 0; it < opts.max_iter; ++it) {
        for (int i = 0; i < p; ++i) f.col(i) = access.field(x + z.col(i));
        const Mat znew = tau * f * at;
        last = (znew - z).cwiseAbs().maxCoeff();
        z = znew;
        if (!std::isfinite(last)) break;
        if (last <= opts.tol * scale) {
          converged = true;
          break;
        }
      }
    } else {
      const Mat jac = access.jacobian(x);
      gmat.setIdentity();
      for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
          gmat.block(i * n, j * n, n, n) -= tau * tab.a(i, j) * jac;
        }
      }
      Eigen::PartialPivLU<Mat> lu(gmat);
      for (int it = 0; it < opts.max_iter; ++it) {
        for (int i = 0; i < p; ++i) f.col(i) = access.field(x + z.col(i));
        const Mat phi = z - tau * f * at;
        for (int i = 0; i < p; ++i) residual.segment(i * n, n) = phi.col(i);
        const Vec dz = lu.solve(residual);
        for (int i = 0; i < p; ++i) z.col(i) -= dz.segment(i * n, n);
        last = dz.cwiseAbs().maxCoeff();
        if (!std::isfinite(last)) break;
        if (last <= opts.tol * scale) {
          converged = true;
          for (int i = 0; i < p; ++i) f.col(i) = access.field(x + z.col(i));
          break;
        }
      }
    }
    if (!converged) {
      std::ostringstream os;
      os << "stage equations did not converge at step " << step << " after "
         << opts.max_iter << " iterations (last update " << last << ")";
      throw ConvergenceError(os.str(), last);
    }
    x += tau * (f * tab.b);
    check_finite(x, step);
    maybe_record(traj, step, steps, opts.stride, x);
  }
  return traj;
}

}  // namespace

Trajectory integrate_nonlinear(const ButcherTableau& tab,
                               const HamiltonianSystem& system, const Vec& x0,
                               double tau, Index steps,
                               const NonlinearOptions& opts) {
  return integrate_collocation(tab, field_access(system), state_dim(system),
                               x0, tau, steps, opts);
}

Trajectory integrate_nonlinear(const ButcherTableau& tab,
                               const PolynomialField& field, const Vec& x0,
                               double tau, Index steps,
                               const NonlinearOptions& opts) {
  const auto shared = std::make_shared<PolynomialField>(field);
  FieldAccess access;
  access.field = [shared](const Vec& x) -> Vec { return (*shared)(x); };
  access.jacobian = [shared](const Vec& x) -> Mat { return shared->jacobian(x); };
  return integrate_collocation(tab, access, field.dim(), x0, tau, steps, opts);
}

Trajectory integrate_rk4(const HamiltonianSystem& system, const Vec& x0,
                         double tau, Index steps, Index stride) {
  check_run(state_dim(system), x0, tau, steps, stride);
  const FieldAccess access = field_access(system);
  Trajectory traj;
  traj.tau = tau;
  traj.steps = steps;
  Vec x = x0;
  traj.record(0, x);
  for (Index n = 1; n <= steps; ++n) {
    const Vec k1 = access.field(x);
    const Vec k2 = access.field(x + 0.5 * tau * k1);
    const Vec k3 = access.field(x + 0.5 * tau * k2);
    const Vec k4 = access.field(x + tau * k3);
    x += (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    check_finite(x, n);
    maybe_record(traj, n, steps, stride, x);
  }
  return traj;
}

Trajectory integrate_verlet(const HamiltonianSystem& system, const Vec& x0,
                            double tau, Index steps, Index stride) {
  const SeparableForceSystem s = as_separable(system);
  check_run(s.dim(), x0, tau, steps, stride);
  const Index d = s.d;
  Trajectory traj;
  traj.tau = tau;
  traj.steps = steps;
  Vec q = x0.head(d);
  Vec p = x0.tail(d);
  Vec force = s.force(q);
  Vec x(2 * d);
  traj.record(0, x0);
  for (Index n = 1; n <= steps; ++n) {
    p += 0.5 * tau * force;
    q += tau * p.cwiseQuotient(s.masses);
    force = s.force(q);
    p += 0.5 * tau * force;
    if (n % stride == 0 || n == steps) {
      x << q, p;
      check_finite(x, n);
      traj.record(n, x);
    }
  }
  return traj;
}

}  // namespace symplectic
