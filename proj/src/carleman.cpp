#include "symplectic/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/lambert_w.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "symplectic/errors.hpp"

namespace symplectic {

namespace {

Index ipow(Index base, int e) {
  Index v = 1;
  for (int i = 0; i < e; ++i) v *= base;
  return v;
}

std::vector<Index> level_offsets(Index n, int n_levels) {
  std::vector<Index> off{0};
  for (int j = 1; j <= n_levels; ++j) off.push_back(off.back() + ipow(n, j));
  return off;
}

int level_of(const std::vector<Index>& off, Index idx) {
  const auto it = std::upper_bound(off.begin(), off.end(), idx);
  return static_cast<int>(it - off.begin());
}

SpMat filter_blocks(const CarlemanSystem& csys, int shift) {
  std::vector<Eigen::Triplet<double>> trips;
  for (Index k = 0; k < csys.a.outerSize(); ++k) {
    for (SpMat::InnerIterator it(csys.a, k); it; ++it) {
      if (level_of(csys.offsets, it.col()) - level_of(csys.offsets, it.row()) ==
          shift) {
        trips.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }
  SpMat out(csys.a.rows(), csys.a.cols());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

CMat ckron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double eigen_scale(const CVec& lambda) {
  return std::max(1.0, lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0);
}

std::string format_complex(Complex z) {
  std::ostringstream os;
  os.precision(6);
  os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------- assembly

Mat CarlemanSystem::block(int i, int j) const {
  if (i < 1 || j < 1 || i > N || j > N) throw ShapeError("block index out of range");
  return Mat(a.block(offsets[i - 1], offsets[j - 1], block_size(i), block_size(j)));
}

SpMat CarlemanSystem::diagonal_part() const { return filter_blocks(*this, 0); }
SpMat CarlemanSystem::coupling_part() const { return filter_blocks(*this, 1); }

Index carleman_dim(Index n, int n_levels) {
  return level_offsets(n, n_levels).back();
}

Index carleman_nnz(Index n, int n_levels, Index nnz_f1, Index nnz_f2) {
  double total = 0.0;
  for (int j = 1; j <= n_levels; ++j) {
    const double rest = std::pow(static_cast<double>(n), j - 1);
    total += j * static_cast<double>(nnz_f1) * rest;
    if (j < n_levels) total += j * static_cast<double>(nnz_f2) * rest;
  }
  return total > 9e18 ? std::numeric_limits<Index>::max()
                      : static_cast<Index>(total);
}

CarlemanSystem build_carleman(const PolynomialField& field, int n_levels) {
  const Index n = field.f1.rows();
  if (n_levels < 1) throw ParameterDomainError("Carleman level N must be >= 1");
  if (field.f1.cols() != n || field.f2.rows() != n || field.f2.cols() != n * n) {
    throw ShapeError("Carleman: F1 must be n x n and F2 n x n^2");
  }
  const Index predicted =
      carleman_nnz(n, n_levels, field.f1.nonZeros(), field.f2.nonZeros());
  if (predicted > kCarlemanNnzBudget) {
    throw CapabilityError("Carleman system at N = " + std::to_string(n_levels) +
                          " needs about " + std::to_string(predicted) +
                          " nonzeros (budget 1e7)");
  }
  CarlemanSystem csys;
  csys.N = n_levels;
  csys.n = n;
  csys.f1 = field.f1;
  csys.f2 = field.f2;
  csys.offsets = level_offsets(n, n_levels);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(predicted));
  auto append = [&](const SpMat& part, Index row0, Index col0) {
    for (Index k = 0; k < part.outerSize(); ++k) {
      for (SpMat::InnerIterator it(part, k); it; ++it) {
        trips.emplace_back(row0 + it.row(), col0 + it.col(), it.value());
      }
    }
  };
  for (int j = 1; j <= n_levels; ++j) {
    for (int i = 0; i < j; ++i) {
      const Index left = ipow(n, i);
      const Index right = ipow(n, j - 1 - i);
      append(kron_sandwich(left, field.f1, right), csys.offsets[j - 1],
             csys.offsets[j - 1]);
      if (j < n_levels) {
        append(kron_sandwich(left, field.f2, right), csys.offsets[j - 1],
               csys.offsets[j]);
      }
    }
  }
  const Index total = csys.offsets.back();
  csys.a = SpMat(total, total);
  csys.a.setFromTriplets(trips.begin(), trips.end());
  csys.a.prune(0.0);
  return csys;
}

CarlemanSystem build_carleman(const CubicHamiltonian& h, int n_levels) {
  return build_carleman(h.field(), n_levels);
}

Vec kron_power(const Vec& x, int j) {
  Vec out = Vec::Ones(1);
  for (int level = 0; level < j; ++level) {
    Vec next(out.size() * x.size());
    for (Index a = 0; a < out.size(); ++a) {
      next.segment(a * x.size(), x.size()) = out[a] * x;
    }
    out.swap(next);
  }
  return out;
}

Vec lift(const Vec& x, int n_levels) {
  const auto off = level_offsets(x.size(), n_levels);
  Vec y(off.back());
  Vec power = Vec::Ones(1);
  for (int j = 1; j <= n_levels; ++j) {
    Vec next(power.size() * x.size());
    for (Index a = 0; a < power.size(); ++a) {
      next.segment(a * x.size(), x.size()) = power[a] * x;
    }
    power.swap(next);
    y.segment(off[j - 1], power.size()) = power;
  }
  return y;
}

Mat lift_jacobian(const Vec& x, int n_levels) {
  const Index n = x.size();
  const auto off = level_offsets(n, n_levels);
  Mat jac = Mat::Zero(off.back(), n);
  Vec power = Vec::Ones(1);
  Mat dpower = Mat::Zero(1, n);
  for (int j = 1; j <= n_levels; ++j) {
    // d(u (x) x) = du (x) x + u (x) I
    Mat next_d(power.size() * n, n);
    Vec next(power.size() * n);
    for (Index a = 0; a < power.size(); ++a) {
      for (Index b = 0; b < n; ++b) {
        next_d.row(a * n + b) = dpower.row(a) * x[b];
        next_d(a * n + b, b) += power[a];
        next[a * n + b] = power[a] * x[b];
      }
    }
    power.swap(next);
    dpower.swap(next_d);
    jac.middleRows(off[j - 1], power.size()) = dpower;
  }
  return jac;
}

// ---------------------------------------------------------------- resonance

std::string ResonanceResult::describe() const {
  std::ostringstream os;
  if (witness.empty()) return "no multiset examined";
  for (std::size_t k = 0; k < witness.size(); ++k) {
    os << (k ? " + " : "") << "lambda_" << witness[k];
  }
  os << " = " << format_complex(witness_sum);
  if (witness_target >= 0) {
    os << (resonant ? " equals " : " is closest to ") << "lambda_"
       << witness_target << " = "
       << format_complex(eigenvalues[witness_target]);
  }
  return os.str();
}

ResonanceResult resonance_margin(const Mat& f1, int max_order,
                                 ResonanceMode mode) {
  if (max_order < 2) throw ParameterDomainError("resonance: max order must be >= 2");
  const SpectralReport spec = spectral_report(f1);
  if (spec.defective || !(spec.kappa_v < 1e8)) {
    throw DiagonalizabilityError(
        "resonance margin needs a diagonalizable F1 (kappa(V) < 1e8)");
  }
  const Index n = f1.rows();
  double count = 0.0;
  for (int s = 2; s <= max_order; ++s) {
    double c = 1.0;
    for (int k = 1; k <= s; ++k) c = c * static_cast<double>(n - 1 + k) / k;
    count += c;
  }
  if (count > 1e7) {
    throw CapabilityError("resonance enumeration would visit " +
                          std::to_string(static_cast<long long>(count)) +
                          " multisets (limit 1e7)");
  }
  ResonanceResult res;
  res.eigenvalues = spec.eigenvalues;
  res.max_order = max_order;
  res.delta = std::numeric_limits<double>::infinity();
  const CVec& lam = spec.eigenvalues;
  const double tol = kResonanceTolerance * eigen_scale(lam);

  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> cancels(n, n);
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) cancels(a, b) = std::abs(lam[a] + lam[b]) <= tol;
  }

  std::vector<Index> idx;
  bool done = false;
  auto visit = [&]() {
    if (mode == ResonanceMode::non_cancelling) {
      for (std::size_t u = 0; u < idx.size(); ++u) {
        for (std::size_t v = u + 1; v < idx.size(); ++v) {
          if (cancels(idx[u], idx[v])) return;
        }
      }
    }
    ++res.multisets_checked;
    Complex sum{0.0, 0.0};
    for (Index k : idx) sum += lam[k];
    for (Index i = 0; i < n; ++i) {
      const double dist = std::abs(sum - lam[i]);
      if (dist < res.delta) {
        res.delta = dist;
        res.witness = idx;
        res.witness_target = i;
        res.witness_sum = sum;
      }
    }
    if (res.delta <= tol) {
      res.delta = 0.0;
      res.resonant = true;
      done = true;
    }
  };
  // nondecreasing index sequences of length s
  auto recurse = [&](auto&& self, int s, Index start) -> void {
    if (done) return;
    if (static_cast<int>(idx.size()) == s) {
      visit();
      return;
    }
    for (Index k = start; k < n && !done; ++k) {
      idx.push_back(k);
      self(self, s, k);
      idx.pop_back();
    }
  };
  for (int s = 2; s <= max_order && !done; ++s) recurse(recurse, s, 0);
  if (res.multisets_checked == 0) res.delta = std::numeric_limits<double>::infinity();
  return res;
}

double convergence_radius(double mu, double kappa1_v, double norm1_f2,
                          double delta) {
  if (!(mu >= 0.0) || !(kappa1_v >= 1.0) || !(norm1_f2 >= 0.0)) {
    throw ParameterDomainError("convergence radius: need mu >= 0, kappa >= 1");
  }
  if (norm1_f2 == 0.0) return 0.0;
  if (!(delta > 0.0)) {
    throw ResonanceError("resonance margin is zero; R_r is undefined");
  }
  return 4.0 * std::numbers::e * mu * kappa1_v * norm1_f2 / delta;
}

double convergence_radius(const Mat& f1, const SpMat& f2, double mu,
                          int max_order) {
  const double nf2 = norm1(f2);
  if (nf2 == 0.0) return 0.0;
  const auto res = resonance_margin(f1, max_order);
  if (res.resonant) {
    throw ResonanceError("F1 is resonant: " + res.describe());
  }
  const auto spec = spectral_report(f1);
  return convergence_radius(mu, spec.kappa1_v, nf2, res.delta);
}

void diagnose_embedding(CarlemanSystem& csys, double mu) {
  const Mat f1 = Mat(csys.f1);
  const auto spec = spectral_report(f1);
  csys.mu = mu;
  csys.kappa1_v = spec.kappa1_v;
  const double nf2 = norm1(csys.f2);
  const auto res = resonance_margin(f1, csys.N + 2);
  csys.delta = res.delta;
  if (nf2 == 0.0) {
    csys.rr = 0.0;
  } else if (res.resonant) {
    csys.rr = std::numeric_limits<double>::infinity();
  } else {
    csys.rr = convergence_radius(mu, spec.kappa1_v, nf2, res.delta);
  }
}

double estimate_mu(const PolynomialField& field, const Vec& x0,
                   double horizon) {
  if (!(horizon > 0.0)) throw ParameterDomainError("estimate_mu: T must be positive");
  const auto traj =
      integrate_nonlinear(gauss_tableau(2), field, x0, horizon / 200.0, 200);
  double best = 0.0;
  for (const auto& x : traj.states) best = std::max(best, x.lpNorm<1>());
  return 1.25 * best;
}

TruncationChoice choose_truncation(double horizon, double eps, double rr) {
  if (!(horizon > 0.0) || !(eps > 0.0)) {
    throw ParameterDomainError("choose_truncation: T and eps must be positive");
  }
  if (!(rr >= 0.0 && rr < 1.0)) {
    throw ParameterDomainError("choose_truncation: R_r must lie in [0, 1)");
  }
  TruncationChoice out;
  if (rr == 0.0) {
    out.n_levels = kTruncationFloor;
    return out;
  }
  const double a = std::log(rr);
  out.lambert_valid = eps < horizon / (std::numbers::e * std::log(1.0 / rr));
  if (out.lambert_valid) {
    const double arg = a * eps * rr / horizon;
    if (arg >= -1.0 / std::numbers::e && arg < 0.0) {
      out.lambert_estimate = boost::math::lambert_wm1(arg) / a;
    } else {
      out.lambert_valid = false;
    }
  }
  double last = 0.0;
  for (int n = kTruncationFloor; n <= kTruncationCeiling; ++n) {
    last = n * horizon * std::pow(rr, n - 1);
    if (last <= eps) {
      out.n_levels = n;
      out.bound = last;
      return out;
    }
  }
  std::ostringstream os;
  os << "no truncation level N <= " << kTruncationCeiling
     << " reaches eps = " << eps << "; best achievable bound is " << last;
  throw TruncationInfeasibleError(os.str(), last);
}

// ---------------------------------------------------------------- integration

StepOperator carleman_step_operator(const CarlemanSystem& csys,
                                    const ButcherTableau& tab, double tau,
                                    bool compute_kappa) {
  StepOptions opts;
  opts.compute_kappa = compute_kappa;
  return build_step_operator(tab, csys.a, tau, opts);
}

Trajectory integrate_carleman(const CarlemanSystem& csys,
                              const StepOperator& step, const Vec& x0,
                              Index steps, CarlemanRoute route, Index stride) {
  if (x0.size() != csys.n) throw ShapeError("Carleman: x0 length mismatch");
  if (step.dim() != csys.total_dim()) {
    throw ShapeError("Carleman: step operator dimension mismatch");
  }
  if (stride < 1) throw ParameterDomainError("record stride must be >= 1");
  const Vec y0 = lift(x0, csys.N);
  Trajectory traj;
  traj.tau = step.tau;
  traj.steps = steps;
  if (route == CarlemanRoute::sequential) {
    Vec y = y0;
    traj.record(0, y.head(csys.n));
    Vec next(y.size());
    for (Index m = 1; m <= steps; ++m) {
      next.noalias() = step.r * y;
      y.swap(next);
      if (!y.allFinite()) throw DivergenceError("Carleman state became non-finite");
      if (m % stride == 0 || m == steps) traj.record(m, y.head(csys.n));
    }
    return traj;
  }
  const auto sys = assemble(step, y0, steps, 0);
  const auto sol = solve(sys);
  for (Index m = 0; m <= steps; ++m) {
    if (m % stride == 0 || m == steps) {
      traj.record(m, sol.history.segment(m * csys.total_dim(), csys.n));
    }
  }
  return traj;
}

Trajectory integrate_carleman(const CarlemanSystem& csys, const Vec& x0,
                              const ButcherTableau& tab, double tau,
                              Index steps, CarlemanRoute route, Index stride) {
  return integrate_carleman(csys, carleman_step_operator(csys, tab, tau), x0,
                            steps, route, stride);
}

Mat carleman_w11(const CarlemanSystem& csys, const StepOperator& step,
                 const Vec& x0, Index steps, JacobianMethod method) {
  if (x0.size() != csys.n) throw ShapeError("Carleman: x0 length mismatch");
  const Index n = csys.n;
  if (method == JacobianMethod::exact) {
    Mat d = lift_jacobian(x0, csys.N);
    Mat next(d.rows(), d.cols());
    for (Index m = 0; m < steps; ++m) {
      next.noalias() = step.r * d;
      d.swap(next);
    }
    return d.topRows(n);
  }
  const double norm = x0.norm();
  const double h = 1e-6 * (norm > 0.0 ? norm : 1.0);
  auto propagate = [&](const Vec& x) -> Vec {
    Vec y = lift(x, csys.N);
    Vec next(y.size());
    for (Index m = 0; m < steps; ++m) {
      next.noalias() = step.r * y;
      y.swap(next);
    }
    return y.head(n);
  };
  Mat w(n, n);
  for (Index l = 0; l < n; ++l) {
    Vec xp = x0;
    Vec xm = x0;
    xp[l] += h;
    xm[l] -= h;
    w.col(l) = (propagate(xp) - propagate(xm)) / (2.0 * h);
  }
  return w;
}

double symplectic_residual(const CarlemanSystem& csys, const Vec& x0,
                           const ButcherTableau& tab, double tau, Index steps,
                           JacobianMethod method) {
  if (csys.n % 2 != 0) throw ShapeError("symplectic residual needs even n");
  const auto step = carleman_step_operator(csys, tab, tau);
  return symplectic_defect(carleman_w11(csys, step, x0, steps, method));
}

// ---------------------------------------------------------------- bounds

double NormBoundReport::envelope(double t, double kappa_v, double norm_f2,
                                 int n_levels) {
  const double kn = std::pow(kappa_v, n_levels);
  const double rate = kn * n_levels * norm_f2 * t;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 0; k < n_levels; ++k) {
    if (k > 0) term *= rate / k;
    sum += term;
  }
  return kn * sum;
}

NormBoundReport verify_norm_bound(const CarlemanSystem& csys,
                                  const std::vector<double>& t_samples) {
  if (csys.total_dim() > kDenseExponentialLimit) {
    throw CapabilityError("verify_norm_bound: dense exponential limited to "
                          "dimension 4000");
  }
  NormBoundReport rep;
  const auto spec = spectral_report(Mat(csys.f1));
  rep.kappa_v = spec.kappa_v;
  rep.norm_f2 = spectral_norm(csys.f2);
  const Mat a = Mat(csys.a);
  bool ok = true;
  for (double t : t_samples) {
    NormBoundSample s;
    s.t = t;
    const Mat e = (t * a).exp();
    s.measured = spectral_norm(e);
    s.bound = NormBoundReport::envelope(t, rep.kappa_v, rep.norm_f2, csys.N);
    ok = ok && s.measured <= s.bound * (1.0 + 1e-12);  // roundoff in both norms
    rep.samples.push_back(s);
  }
  const SpMat a1 = csys.coupling_part();
  SpMat power = a1;
  for (int k = 1; k < csys.N; ++k) power = (power * a1).pruned(0.0);
  power.prune(0.0);
  rep.nilpotent_nnz = power.nonZeros();
  rep.nilpotent = rep.nilpotent_nnz == 0;
  rep.holds = ok && rep.nilpotent;
  return rep;
}

// ---------------------------------------------------------------- normal form

CMat carleman_eigenvectors(const CarlemanSystem& csys, CVec& eigenvalues) {
  const auto spec = spectral_report(Mat(csys.f1));
  if (spec.defective) {
    throw DiagonalizabilityError("F1 is defective; A has no eigenbasis");
  }
  const Index n = csys.n;
  const Index total = csys.total_dim();
  const CMat v = spec.eigenvectors;
  const CMat vinv = v.inverse();
  const CVec& lam = spec.eigenvalues;
  const double tol = kResonanceTolerance * eigen_scale(lam);

  std::vector<CMat> vpow{CMat::Identity(1, 1)};
  std::vector<CMat> vinvpow{CMat::Identity(1, 1)};
  std::vector<CVec> sums{CVec::Zero(1)};
  for (int j = 1; j <= csys.N; ++j) {
    vpow.push_back(ckron(vpow.back(), v));
    vinvpow.push_back(ckron(vinvpow.back(), vinv));
    CVec s(sums.back().size() * n);
    for (Index a = 0; a < sums.back().size(); ++a) {
      for (Index b = 0; b < n; ++b) s[a * n + b] = sums.back()[a] + lam[b];
    }
    sums.push_back(s);
  }
  std::vector<CMat> coupling;  // A_{i,i+1}
  for (int i = 1; i < csys.N; ++i) {
    coupling.push_back(csys.block(i, i + 1).cast<Complex>());
  }

  CMat w = CMat::Zero(total, total);
  eigenvalues.resize(total);
  Index col = 0;
  for (int j = 1; j <= csys.N; ++j) {
    for (Index c = 0; c < vpow[j].cols(); ++c, ++col) {
      const Complex mu = sums[j][c];
      eigenvalues[col] = mu;
      CVec upper = vpow[j].col(c);
      w.block(csys.offsets[j - 1], col, upper.size(), 1) = upper;
      for (int i = j - 1; i >= 1; --i) {
        // (A_ii - mu) w_i = -A_{i,i+1} w_{i+1}
        CVec rhs = -(coupling[i - 1] * upper);
        CVec coeff = vinvpow[i] * rhs;
        for (Index k = 0; k < coeff.size(); ++k) {
          const Complex gap = sums[i][k] - mu;
          if (std::abs(gap) <= tol) {
            throw DiagonalizabilityError(
                "level-" + std::to_string(j) + " eigenvalue " +
                format_complex(mu) + " collides with a level-" +
                std::to_string(i) + " sum; A is not diagonalizable by a "
                "block-triangular basis");
          }
          coeff[k] /= gap;
        }
        upper = vpow[i] * coeff;
        w.block(csys.offsets[i - 1], col, upper.size(), 1) = upper;
      }
    }
  }
  return w;
}

NormalFormReport normal_form_check(const CarlemanSystem& csys, const Vec& x0,
                                   double horizon, int samples) {
  if (csys.total_dim() > kNormalFormLimit) {
    throw CapabilityError("normal_form_check limited to total dimension 200");
  }
  if (x0.size() != csys.n) throw ShapeError("normal form: x0 length mismatch");
  if (!(horizon > 0.0) || samples < 1) {
    throw ParameterDomainError("normal form: need T > 0 and samples >= 1");
  }
  const Index n = csys.n;
  NormalFormReport rep;
  CVec eigenvalues;
  const CMat w = carleman_eigenvectors(csys, eigenvalues);
  Eigen::PartialPivLU<CMat> lu(w);
  const CMat winv = lu.inverse();
  const CMat e1winv = winv.topRows(n);
  const CVec lambda = eigenvalues.head(n);
  rep.e1_winv_norm = Eigen::BDCSVD<CMat>(e1winv).singularValues()(0);
  {
    const auto s = Eigen::BDCSVD<CMat>(w).singularValues();
    rep.kappa_w = s(0) / s(s.size() - 1);
  }
  {
    Eigen::EigenSolver<Mat> es(Mat(csys.a), false);
    const CVec ea = es.eigenvalues();
    double worst = 0.0;
    for (Index i = 0; i < ea.size(); ++i) {
      worst = std::max(worst, (eigenvalues.array() - ea[i]).abs().minCoeff());
    }
    for (Index i = 0; i < eigenvalues.size(); ++i) {
      worst = std::max(worst, (ea.array() - eigenvalues[i]).abs().minCoeff());
    }
    rep.spectrum_mismatch = worst;
  }
  const CMat v = w.topLeftCorner(n, n);
  const CMat vinv = v.inverse();

  const Vec y0 = lift(x0, csys.N);
  const CVec z0 = e1winv * y0.cast<Complex>();
  const CVec u0 = vinv * x0.cast<Complex>();
  rep.z1_norm = z0.norm();

  const double dt_target = 1e-3;
  const Index per_sample = std::max<Index>(
      1, static_cast<Index>(std::ceil(horizon / samples / dt_target)));
  const double dt = horizon / static_cast<double>(samples * per_sample);
  NonlinearOptions nopts;
  nopts.stride = per_sample;
  const auto ref = integrate_nonlinear(gauss_tableau(4), csys.field(), x0, dt,
                                       samples * per_sample, nopts);
  const Mat a = Mat(csys.a);
  const double slack = 1e-12 * (1.0 + rep.z1_norm) * rep.kappa_w;
  bool ok = true;
  for (std::size_t s = 1; s < ref.size(); ++s) {
    NormalFormSample smp;
    smp.t = ref.times[s];
    const Vec& x = ref.states[s];
    const CVec phase = (lambda * smp.t).array().exp();
    const CVec z = e1winv * lift(x, csys.N).cast<Complex>();
    smp.deviation = (z - phase.cwiseProduct(z0)).norm();
    const Vec lin = (smp.t * a).exp() * y0;
    smp.lifted_error = (lift(x, csys.N) - lin).norm();
    smp.certified = rep.e1_winv_norm * smp.lifted_error;
    smp.linear_deviation =
        (vinv * x.cast<Complex>() - phase.cwiseProduct(u0)).norm();
    ok = ok && smp.deviation <= smp.certified + slack;
    rep.max_deviation = std::max(rep.max_deviation, smp.deviation);
    rep.max_certified = std::max(rep.max_certified, smp.certified);
    rep.max_linear_deviation =
        std::max(rep.max_linear_deviation, smp.linear_deviation);
    rep.samples.push_back(smp);
  }
  rep.within_certificate = ok;
  return rep;
}

}  // namespace symplectic
