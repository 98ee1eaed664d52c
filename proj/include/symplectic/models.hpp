#pragma once

// Hamiltonian systems integrated by the engine.
//
// State ordering is x = (q_1..q_d, p_1..p_d) throughout, so the canonical
// structure matrix is the literal block form J = [[0, I], [-I, 0]] and the
// flow is x' = J grad H(x).
//
//   QuadraticHamiltonian   H(x) = x^T Q x,                 K = 2 J Q
//   CubicHamiltonian       H(x) = x^T Q x + C[x, x, x],    f(x) = F1 x + F2 (x (x) x)
//                          with F1 = 2 J Q and F2 = 3 J C flattened to n x n^2
//   SeparableForceSystem   H(q, p) = sum p_i^2 / (2 m_i) + U(q)
//
// All model values are immutable after construction.

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "symplectic/linalg.hpp"

namespace symplectic {

struct SymplecticStructure {
  Index d = 0;
  Mat matrix() const { return canonical_j(d); }
};

class QuadraticHamiltonian {
 public:
  /// q must be square with even dimension and symmetric to 1e-12 (relative);
  /// it is stored exactly symmetrized.
  explicit QuadraticHamiltonian(Mat q);

  Index dof() const noexcept { return q_.rows() / 2; }
  Index dim() const noexcept { return q_.rows(); }
  const Mat& q() const noexcept { return q_; }

  /// K = J (2Q), the generator of x' = K x.
  Mat generator() const;
  double energy(const Vec& x) const;
  Vec gradient(const Vec& x) const;

 private:
  Mat q_;
};

/// Fully symmetric 3-way coefficient array C_{ijk}. Stored dense for d <= 16
/// and as expanded coordinate triplets (every distinct permutation present)
/// above that.
class CubicTensor {
 public:
  struct Entry {
    Index i, j, k;
    double value;
  };

  static constexpr Index kDenseDofLimit = 16;

  CubicTensor() = default;
  /// Each entry assigns its value to all permutations of (i, j, k).
  /// Conflicting assignments to the same index class are rejected.
  CubicTensor(Index n, const std::vector<Entry>& entries);
  static CubicTensor zero(Index n) { return CubicTensor(n, {}); }

  Index dim() const noexcept { return n_; }
  bool dense() const noexcept { return !dense_.empty() || n_ == 0; }
  bool is_zero() const noexcept { return expanded_.empty(); }
  double operator()(Index i, Index j, Index k) const;

  /// sum_{ijk} C_ijk x_i x_j x_k
  double contract3(const Vec& x) const;
  /// v_i = sum_{jk} C_ijk x_j x_k
  Vec contract2(const Vec& x) const;
  /// M_ij = sum_k C_ijk x_k
  Mat contract1(const Vec& x) const;
  /// n x n^2 with column index j * n + k.
  SpMat flattened() const;
  const std::vector<Entry>& expanded_entries() const noexcept {
    return expanded_;
  }

 private:
  Index n_ = 0;
  std::vector<Entry> expanded_;
  std::vector<double> dense_;
};

/// x' = F1 x + F2 (x (x) x), the form the Carleman embedding lifts.
struct PolynomialField {
  SpMat f1;  // n x n
  SpMat f2;  // n x n^2

  Index dim() const noexcept { return f1.rows(); }
  Vec operator()(const Vec& x) const;
  /// F1 + F2 (I (x) x + x (x) I)
  Mat jacobian(const Vec& x) const;
};

class CubicHamiltonian {
 public:
  CubicHamiltonian(QuadraticHamiltonian quadratic, CubicTensor cubic);

  Index dof() const noexcept { return quadratic_.dof(); }
  Index dim() const noexcept { return quadratic_.dim(); }
  const Mat& q() const noexcept { return quadratic_.q(); }
  const QuadraticHamiltonian& quadratic() const noexcept { return quadratic_; }
  const CubicTensor& c() const noexcept { return cubic_; }

  double energy(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  /// F1 = 2 J Q, F2 = 3 J C (flattened).
  const PolynomialField& field() const noexcept { return *field_; }

 private:
  QuadraticHamiltonian quadratic_;
  CubicTensor cubic_;
  std::shared_ptr<const PolynomialField> field_;
};

struct SeparableForceSystem {
  Index d = 0;
  Vec masses;  // one per coordinate
  std::function<double(const Vec&)> potential;
  std::function<Vec(const Vec&)> force;  // -grad U
  std::string name;

  Index dim() const noexcept { return 2 * d; }
  double energy(const Vec& x) const;
  Vec field(const Vec& x) const;
};

using HamiltonianSystem =
    std::variant<QuadraticHamiltonian, CubicHamiltonian, SeparableForceSystem>;

enum class Boundary {
  fixed,       // walls on both sides: q_0 = q_{L+1} = 0
  fixed_free,  // wall on the left only
  free,        // interior bonds only
};

QuadraticHamiltonian make_harmonic_chain(Index particles, double stiffness,
                                         double mass,
                                         Boundary boundary = Boundary::fixed);

/// U(z) = k/2 z^2 + alpha/3 z^3 on relative displacements.
CubicHamiltonian make_fpu_chain(Index particles, double stiffness,
                                double alpha, double mass,
                                Boundary boundary = Boundary::fixed);

struct LennardJonesParams {
  Index particles = 0;
  double epsilon = 1.0;
  double sigma = 1.0;
  double box = 0.0;
  int spatial_dim = 2;
  double mass = 1.0;

  double cutoff() const noexcept { return 2.5 * sigma; }
};

/// Pairwise 12-6 potential cut at rc = 2.5 sigma in shifted-force form,
///   U(r) - U(rc) - (r - rc) U'(rc),
/// so energy and force both vanish at the cutoff. Periodic minimum image. Pairs closer than 0.5 sigma raise
/// IllConditionedConfigurationError on evaluation.
SeparableForceSystem make_lennard_jones(const LennardJonesParams& params);
SeparableForceSystem make_lennard_jones(Index particles, double epsilon,
                                        double sigma, double box);

/// Unshifted pair potential and the scalar pair force -dU/dr.
double lj_pair_potential(double r, double epsilon, double sigma);
double lj_pair_force(double r, double epsilon, double sigma);

/// Square/cubic lattice filling the box, ceil(L^(1/dim)) sites per side.
Vec lj_lattice_positions(const LennardJonesParams& params);

/// Separable view of a Hamiltonian whose Q has no q-p coupling, a diagonal
/// momentum block and whose cubic part touches only positions. Throws
/// UnsupportedSystemError otherwise.
SeparableForceSystem as_separable(const QuadraticHamiltonian& h);
SeparableForceSystem as_separable(const CubicHamiltonian& h);
SeparableForceSystem as_separable(const HamiltonianSystem& h);

/// Q (and optional C) from `i,j,value` / `i,j,k,value` CSV files.
HamiltonianSystem load_matrix_model(const std::string& q_path,
                                    const std::string& c_path = {});

double evaluate_energy(const HamiltonianSystem& system, const Vec& x);
Vec evaluate_field(const HamiltonianSystem& system, const Vec& x);
Index state_dim(const HamiltonianSystem& system);

}  // namespace symplectic
