#include "symplectic/models.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "symplectic/errors.hpp"

namespace symplectic {

namespace {

using Key = std::array<Index, 3>;

Key sorted_key(Index i, Index j, Index k) {
  Key key{i, j, k};
  std::sort(key.begin(), key.end());
  return key;
}

void check_state(Index expected, const Vec& x, const char* who) {
  if (x.size() != expected) {
    std::ostringstream os;
    os << who << ": state has length " << x.size() << ", expected "
       << expected;
    throw ShapeError(os.str());
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterDomainError(std::string(name) + " must be positive");
  }
}

// Stiffness matrix of sum_b (q_{b+1} - q_b)^2 over the bonds of a chain.
std::vector<std::pair<Index, Index>> chain_bonds(Index particles,
                                                 Boundary boundary) {
  // -1 marks a wall
  std::vector<std::pair<Index, Index>> bonds;
  if (boundary == Boundary::fixed || boundary == Boundary::fixed_free) {
    bonds.emplace_back(-1, 0);
  }
  for (Index i = 0; i + 1 < particles; ++i) bonds.emplace_back(i, i + 1);
  if (boundary == Boundary::fixed) bonds.emplace_back(particles - 1, -1);
  return bonds;
}

Mat chain_q(Index particles, double stiffness, double mass,
            Boundary boundary) {
  const Index d = particles;
  Mat q = Mat::Zero(2 * d, 2 * d);
  for (auto [a, b] : chain_bonds(particles, boundary)) {
    if (a >= 0) q(a, a) += 0.5 * stiffness;
    if (b >= 0) q(b, b) += 0.5 * stiffness;
    if (a >= 0 && b >= 0) {
      q(a, b) -= 0.5 * stiffness;
      q(b, a) -= 0.5 * stiffness;
    }
  }
  for (Index i = 0; i < d; ++i) q(d + i, d + i) = 0.5 / mass;
  return q;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{}
                                         : cell.substr(b, e - b + 1));
  }
  return out;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

struct CsvRow {
  std::vector<Index> idx;
  double value = 0.0;
  std::size_t line = 0;
};

std::vector<CsvRow> read_index_csv(const std::string& path, std::size_t arity) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path, path);
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[line.find_first_not_of(" \t")] == '#') continue;
    auto cells = split_csv(line);
    CsvRow row;
    row.line = lineno;
    bool ok = cells.size() == arity + 1;
    for (std::size_t c = 0; ok && c < arity; ++c) {
      long long v = 0;
      ok = parse_number(cells[c], v) && v >= 0;
      row.idx.push_back(static_cast<Index>(v));
    }
    ok = ok && parse_number(cells[arity], row.value) &&
         std::isfinite(row.value);
    if (!ok) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw ConfigError(path + ":" + std::to_string(lineno) +
                            ": expected " + std::to_string(arity) +
                            " indices and a value",
                        path, lineno);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

// ---------------------------------------------------------------- quadratic

QuadraticHamiltonian::QuadraticHamiltonian(Mat q) : q_(std::move(q)) {
  if (q_.rows() != q_.cols() || q_.rows() % 2 != 0 || q_.rows() == 0) {
    throw ShapeError("Q must be square with positive even dimension");
  }
  if (!q_.allFinite()) throw ParameterDomainError("Q has non-finite entries");
  const double scale = std::max(1.0, q_.cwiseAbs().maxCoeff());
  if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ParameterDomainError("Q is not symmetric");
  }
  q_ = 0.5 * (q_ + q_.transpose()).eval();
}

Mat QuadraticHamiltonian::generator() const {
  return canonical_j(dof()) * (2.0 * q_);
}

double QuadraticHamiltonian::energy(const Vec& x) const {
  check_state(dim(), x, "energy");
  return x.dot(q_ * x);
}

Vec QuadraticHamiltonian::gradient(const Vec& x) const {
  check_state(dim(), x, "gradient");
  return 2.0 * (q_ * x);
}

// ---------------------------------------------------------------- cubic tensor

CubicTensor::CubicTensor(Index n, const std::vector<Entry>& entries) : n_(n) {
  if (n < 0) throw ShapeError("negative tensor dimension");
  std::map<Key, double> classes;
  for (const auto& e : entries) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= n || e.j >= n || e.k >= n) {
      throw ShapeError("cubic tensor index out of range");
    }
    if (!std::isfinite(e.value)) {
      throw ParameterDomainError("cubic tensor entry is not finite");
    }
    const Key key = sorted_key(e.i, e.j, e.k);
    auto [it, inserted] = classes.emplace(key, e.value);
    if (!inserted && it->second != e.value) {
      throw ParameterDomainError("conflicting values for one index class");
    }
  }
  for (const auto& [key, value] : classes) {
    if (value == 0.0) continue;
    Key perm = key;
    do {
      expanded_.push_back({perm[0], perm[1], perm[2], value});
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  if (n_ <= 2 * kDenseDofLimit) {
    dense_.assign(static_cast<std::size_t>(n_ * n_ * n_), 0.0);
    for (const auto& e : expanded_) {
      dense_[static_cast<std::size_t>((e.i * n_ + e.j) * n_ + e.k)] = e.value;
    }
  }
}

double CubicTensor::operator()(Index i, Index j, Index k) const {
  if (i < 0 || j < 0 || k < 0 || i >= n_ || j >= n_ || k >= n_) {
    throw ShapeError("cubic tensor index out of range");
  }
  if (!dense_.empty()) {
    return dense_[static_cast<std::size_t>((i * n_ + j) * n_ + k)];
  }
  for (const auto& e : expanded_) {
    if (e.i == i && e.j == j && e.k == k) return e.value;
  }
  return 0.0;
}

double CubicTensor::contract3(const Vec& x) const {
  check_state(n_, x, "contract3");
  double s = 0.0;
  for (const auto& e : expanded_) s += e.value * x[e.i] * x[e.j] * x[e.k];
  return s;
}

Vec CubicTensor::contract2(const Vec& x) const {
  check_state(n_, x, "contract2");
  Vec v = Vec::Zero(n_);
  for (const auto& e : expanded_) v[e.i] += e.value * x[e.j] * x[e.k];
  return v;
}

Mat CubicTensor::contract1(const Vec& x) const {
  check_state(n_, x, "contract1");
  Mat m = Mat::Zero(n_, n_);
  for (const auto& e : expanded_) m(e.i, e.j) += e.value * x[e.k];
  return m;
}

SpMat CubicTensor::flattened() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(expanded_.size());
  for (const auto& e : expanded_) {
    trips.emplace_back(e.i, e.j * n_ + e.k, e.value);
  }
  SpMat out(n_, n_ * n_);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

// ---------------------------------------------------------------- field

Vec PolynomialField::operator()(const Vec& x) const {
  check_state(dim(), x, "field");
  Vec out = f1 * x;
  const Index n = dim();
  for (Index c = 0; c < f2.outerSize(); ++c) {
    const double xx = x[c / n] * x[c % n];
    if (xx == 0.0) continue;
    for (SpMat::InnerIterator it(f2, c); it; ++it) {
      out[it.row()] += it.value() * xx;
    }
  }
  return out;
}

Mat PolynomialField::jacobian(const Vec& x) const {
  check_state(dim(), x, "jacobian");
  Mat jac = Mat(f1);
  const Index n = dim();
  for (Index c = 0; c < f2.outerSize(); ++c) {
    const Index j = c / n;
    const Index k = c % n;
    for (SpMat::InnerIterator it(f2, c); it; ++it) {
      jac(it.row(), j) += it.value() * x[k];
      jac(it.row(), k) += it.value() * x[j];
    }
  }
  return jac;
}

// ---------------------------------------------------------------- cubic H

CubicHamiltonian::CubicHamiltonian(QuadraticHamiltonian quadratic,
                                   CubicTensor cubic)
    : quadratic_(std::move(quadratic)), cubic_(std::move(cubic)) {
  if (cubic_.dim() != quadratic_.dim()) {
    throw ShapeError("C and Q dimensions differ");
  }
  const Index n = dim();
  const Index d = dof();
  auto field = std::make_shared<PolynomialField>();
  field->f1 = to_sparse(quadratic_.generator());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(cubic_.expanded_entries().size());
  // (J C)_{ijk}: row i < d takes +C_{i+d,jk}, row i >= d takes -C_{i-d,jk}
  for (const auto& e : cubic_.expanded_entries()) {
    const Index row = e.i >= d ? e.i - d : e.i + d;
    const double sign = e.i >= d ? 1.0 : -1.0;
    trips.emplace_back(row, e.j * n + e.k, 3.0 * sign * e.value);
  }
  field->f2 = SpMat(n, n * n);
  field->f2.setFromTriplets(trips.begin(), trips.end());
  field_ = std::move(field);
}

double CubicHamiltonian::energy(const Vec& x) const {
  return quadratic_.energy(x) + cubic_.contract3(x);
}

Vec CubicHamiltonian::gradient(const Vec& x) const {
  return quadratic_.gradient(x) + 3.0 * cubic_.contract2(x);
}

// ---------------------------------------------------------------- separable

double SeparableForceSystem::energy(const Vec& x) const {
  check_state(dim(), x, "energy");
  const auto p = x.tail(d);
  double kinetic = 0.0;
  for (Index i = 0; i < d; ++i) kinetic += p[i] * p[i] / (2.0 * masses[i]);
  return kinetic + potential(x.head(d));
}

Vec SeparableForceSystem::field(const Vec& x) const {
  check_state(dim(), x, "field");
  Vec out(dim());
  out.head(d) = x.tail(d).cwiseQuotient(masses);
  out.tail(d) = force(x.head(d));
  return out;
}

// ---------------------------------------------------------------- chains

QuadraticHamiltonian make_harmonic_chain(Index particles, double stiffness,
                                         double mass, Boundary boundary) {
  if (particles < 1) throw ParameterDomainError("harmonic chain needs L >= 1");
  require_positive(stiffness, "stiffness k");
  require_positive(mass, "mass m");
  return QuadraticHamiltonian(chain_q(particles, stiffness, mass, boundary));
}

CubicHamiltonian make_fpu_chain(Index particles, double stiffness,
                                double alpha, double mass, Boundary boundary) {
  if (particles < 2) throw ParameterDomainError("FPU chain needs L >= 2");
  require_positive(stiffness, "stiffness k");
  require_positive(mass, "mass m");
  if (!std::isfinite(alpha)) throw ParameterDomainError("alpha is not finite");
  const Index n = 2 * particles;
  QuadraticHamiltonian quad(chain_q(particles, stiffness, mass, boundary));
  if (alpha == 0.0) return CubicHamiltonian(std::move(quad), CubicTensor::zero(n));

  // (alpha/3) z_b^3 with z_b = a_b . x gives C_ijk = (alpha/3) sum_b a_i a_j a_k
  std::map<Key, double> acc;
  for (auto [a, b] : chain_bonds(particles, boundary)) {
    std::vector<std::pair<Index, double>> coeff;
    if (a >= 0) coeff.emplace_back(a, -1.0);
    if (b >= 0) coeff.emplace_back(b, 1.0);
    for (auto [i, ci] : coeff) {
      for (auto [j, cj] : coeff) {
        for (auto [k, ck] : coeff) {
          if (i <= j && j <= k) acc[Key{i, j, k}] += alpha / 3.0 * ci * cj * ck;
        }
      }
    }
  }
  std::vector<CubicTensor::Entry> entries;
  for (const auto& [key, v] : acc) entries.push_back({key[0], key[1], key[2], v});
  return CubicHamiltonian(std::move(quad), CubicTensor(n, entries));
}

// ---------------------------------------------------------------- Lennard-Jones

double lj_pair_potential(double r, double epsilon, double sigma) {
  const double s6 = std::pow(sigma / r, 6);
  return 4.0 * epsilon * (s6 * s6 - s6);
}

double lj_pair_force(double r, double epsilon, double sigma) {
  const double s6 = std::pow(sigma / r, 6);
  return 24.0 * epsilon * (2.0 * s6 * s6 - s6) / r;
}

SeparableForceSystem make_lennard_jones(const LennardJonesParams& prm) {
  if (prm.particles < 2) throw ParameterDomainError("LJ gas needs L >= 2");
  require_positive(prm.epsilon, "epsilon");
  require_positive(prm.sigma, "sigma");
  require_positive(prm.box, "box");
  require_positive(prm.mass, "mass");
  if (prm.spatial_dim < 1 || prm.spatial_dim > 3) {
    throw ParameterDomainError("spatial dimension must be 1, 2 or 3");
  }
  if (!(prm.box > 2.0 * prm.cutoff())) {
    throw ParameterDomainError("box must exceed twice the cutoff (5 sigma)");
  }
  const Index dim = prm.spatial_dim;
  const Index count = prm.particles;
  const double eps = prm.epsilon;
  const double sig = prm.sigma;
  const double box = prm.box;
  const double rc = prm.cutoff();
  const double shift = lj_pair_potential(rc, eps, sig);
  const double force_shift = lj_pair_force(rc, eps, sig);
  const double min_r = 0.5 * sig;

  // Calls f(a, b, r, delta) for every pair inside the cutoff.
  auto for_pairs = [=](const Vec& q, auto&& f) {
    if (q.size() != count * dim) throw ShapeError("LJ: position length mismatch");
    std::array<double, 3> delta{};
    for (Index a = 0; a < count; ++a) {
      for (Index b = a + 1; b < count; ++b) {
        double r2 = 0.0;
        for (Index c = 0; c < dim; ++c) {
          double dx = q[a * dim + c] - q[b * dim + c];
          dx -= box * std::nearbyint(dx / box);
          delta[c] = dx;
          r2 += dx * dx;
        }
        if (r2 >= rc * rc) continue;
        const double r = std::sqrt(r2);
        if (r < min_r) {
          throw IllConditionedConfigurationError(
              "LJ: particles " + std::to_string(a) + " and " +
              std::to_string(b) + " overlap (r < 0.5 sigma)");
        }
        f(a, b, r, delta);
      }
    }
  };

  SeparableForceSystem sys;
  sys.d = count * dim;
  sys.masses = Vec::Constant(sys.d, prm.mass);
  sys.name = "lennard-jones";
  sys.potential = [=](const Vec& q) {
    double u = 0.0;
    for_pairs(q, [&](Index, Index, double r, const std::array<double, 3>&) {
      u += lj_pair_potential(r, eps, sig) - shift + (r - rc) * force_shift;
    });
    return u;
  };
  sys.force = [=](const Vec& q) {
    Vec f = Vec::Zero(q.size());
    for_pairs(q, [&](Index a, Index b, double r,
                     const std::array<double, 3>& delta) {
      const double s = (lj_pair_force(r, eps, sig) - force_shift) / r;
      for (Index c = 0; c < dim; ++c) {
        f[a * dim + c] += s * delta[c];
        f[b * dim + c] -= s * delta[c];
      }
    });
    return f;
  };
  return sys;
}

SeparableForceSystem make_lennard_jones(Index particles, double epsilon,
                                        double sigma, double box) {
  LennardJonesParams prm;
  prm.particles = particles;
  prm.epsilon = epsilon;
  prm.sigma = sigma;
  prm.box = box;
  return make_lennard_jones(prm);
}

Vec lj_lattice_positions(const LennardJonesParams& prm) {
  const Index dim = prm.spatial_dim;
  Index side = 1;
  while (static_cast<double>(std::pow(side, dim)) <
         static_cast<double>(prm.particles)) {
    ++side;
  }
  const double spacing = prm.box / static_cast<double>(side);
  Vec q(prm.particles * dim);
  for (Index a = 0; a < prm.particles; ++a) {
    Index rest = a;
    for (Index c = 0; c < dim; ++c) {
      q[a * dim + c] = (static_cast<double>(rest % side) + 0.5) * spacing;
      rest /= side;
    }
  }
  return q;
}

// ---------------------------------------------------------------- separable views

SeparableForceSystem as_separable(const QuadraticHamiltonian& h) {
  return as_separable(CubicHamiltonian(h, CubicTensor::zero(h.dim())));
}

SeparableForceSystem as_separable(const CubicHamiltonian& h) {
  const Index d = h.dof();
  const Mat& q = h.q();
  if (q.topRightCorner(d, d).cwiseAbs().maxCoeff() != 0.0) {
    throw UnsupportedSystemError("Hamiltonian couples positions and momenta");
  }
  const Mat qpp = q.bottomRightCorner(d, d);
  Vec masses(d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (i != j && qpp(i, j) != 0.0) {
        throw UnsupportedSystemError("kinetic term is not diagonal");
      }
    }
    if (!(qpp(i, i) > 0.0)) {
      throw UnsupportedSystemError("kinetic term is not positive");
    }
    masses[i] = 0.5 / qpp(i, i);
  }
  for (const auto& e : h.c().expanded_entries()) {
    if (e.i >= d || e.j >= d || e.k >= d) {
      throw UnsupportedSystemError("cubic term involves momenta");
    }
  }
  const Mat qqq = q.topLeftCorner(d, d);
  std::vector<CubicTensor::Entry> entries;
  for (const auto& e : h.c().expanded_entries()) {
    if (e.i <= e.j && e.j <= e.k) entries.push_back(e);
  }
  const CubicTensor cq(d, entries);
  SeparableForceSystem sys;
  sys.d = d;
  sys.masses = masses;
  sys.name = "polynomial";
  sys.potential = [qqq, cq](const Vec& x) {
    return x.dot(qqq * x) + cq.contract3(x);
  };
  sys.force = [qqq, cq](const Vec& x) -> Vec {
    return -2.0 * (qqq * x) - 3.0 * cq.contract2(x);
  };
  return sys;
}

SeparableForceSystem as_separable(const HamiltonianSystem& h) {
  return std::visit(
      [](const auto& s) -> SeparableForceSystem {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SeparableForceSystem>) {
          return s;
        } else {
          return as_separable(s);
        }
      },
      h);
}

// ---------------------------------------------------------------- loader

HamiltonianSystem load_matrix_model(const std::string& q_path,
                                    const std::string& c_path) {
  const auto q_rows = read_index_csv(q_path, 2);
  std::vector<CsvRow> c_rows;
  if (!c_path.empty()) c_rows = read_index_csv(c_path, 3);
  Index n = 0;
  for (const auto& r : q_rows) n = std::max({n, r.idx[0] + 1, r.idx[1] + 1});
  for (const auto& r : c_rows) {
    n = std::max({n, r.idx[0] + 1, r.idx[1] + 1, r.idx[2] + 1});
  }
  if (n == 0) throw ConfigError("matrix model has no entries", q_path);
  if (n % 2 != 0) n += 1;
  Mat q = Mat::Zero(n, n);
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
  for (const auto& r : q_rows) {
    const Index i = r.idx[0];
    const Index j = r.idx[1];
    if (seen(i, j) && q(i, j) != r.value) {
      throw ConfigError(q_path + ":" + std::to_string(r.line) +
                            ": conflicting value for Q(" + std::to_string(i) +
                            "," + std::to_string(j) + ")",
                        q_path, r.line);
    }
    q(i, j) = q(j, i) = r.value;
    seen(i, j) = seen(j, i) = true;
  }
  QuadraticHamiltonian quad(q);
  if (c_path.empty()) return quad;
  std::vector<CubicTensor::Entry> entries;
  for (const auto& r : c_rows) {
    entries.push_back({r.idx[0], r.idx[1], r.idx[2], r.value});
  }
  try {
    return CubicHamiltonian(std::move(quad), CubicTensor(n, entries));
  } catch (const ParameterDomainError& e) {
    throw ConfigError(c_path + ": " + e.what(), c_path);
  }
}

// ---------------------------------------------------------------- dispatch

double evaluate_energy(const HamiltonianSystem& system, const Vec& x) {
  return std::visit([&](const auto& s) { return s.energy(x); }, system);
}

Vec evaluate_field(const HamiltonianSystem& system, const Vec& x) {
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, QuadraticHamiltonian>) {
          check_state(s.dim(), x, "field");
          return s.generator() * x;
        } else if constexpr (std::is_same_v<T, CubicHamiltonian>) {
          return s.field()(x);
        } else {
          return s.field(x);
        }
      },
      system);
}

Index state_dim(const HamiltonianSystem& system) {
  return std::visit([](const auto& s) { return s.dim(); }, system);
}

}  // namespace symplectic
