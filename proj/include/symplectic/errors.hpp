#pragma once

// Error types raised across the engine. Every error derives from
// symplectic::Error so callers can catch the family as a whole; the CLI maps
// the concrete types onto exit codes.

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace symplectic {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar parameter is outside its admissible domain (k <= 0, p > 16, ...).
class ParameterDomainError : public Error {
 public:
  using Error::Error;
};

/// Vector/matrix dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// tau * ||K|| is outside the regime where the stage system is guaranteed
/// invertible.
class StabilityDomainError : public Error {
 public:
  StabilityDomainError(const std::string& what, double tau_norm)
      : Error(what), tau_norm_(tau_norm) {}
  double tau_norm() const noexcept { return tau_norm_; }

 private:
  double tau_norm_;
};

/// A linear system that must be solved is (numerically) singular.
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& what,
                            std::complex<double> z = {0.0, 0.0})
      : Error(what), z_(z) {}
  std::complex<double> z() const noexcept { return z_; }

 private:
  std::complex<double> z_;
};

/// An iterative solve did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

/// The requested method cannot be applied to this kind of system
/// (e.g. Verlet on a non-separable Hamiltonian).
class UnsupportedSystemError : public Error {
 public:
  using Error::Error;
};

/// A size/memory guard was hit or an exact method is too expensive.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A propagated quantity overflowed.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be diagonalizable is (numerically) defective.
class DiagonalizabilityError : public Error {
 public:
  using Error::Error;
};

/// An exact resonance among eigenvalue sums makes the margin vanish.
class ResonanceError : public Error {
 public:
  using Error::Error;
};

/// No truncation level up to the ceiling satisfies the error target.
class TruncationInfeasibleError : public Error {
 public:
  TruncationInfeasibleError(const std::string& what, double achievable_eps)
      : Error(what), achievable_eps_(achievable_eps) {}
  double achievable_eps() const noexcept { return achievable_eps_; }

 private:
  double achievable_eps_;
};

/// Particle configuration with overlapping positions.
class IllConditionedConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Least-squares fit on degenerate data (non-positive errors, too few points).
class DegenerateFitError : public Error {
 public:
  using Error::Error;
};

/// Experiment configuration could not be parsed or validated.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::string field, std::size_t line = 0)
      : Error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string field_;
  std::size_t line_;
};

}  // namespace symplectic
