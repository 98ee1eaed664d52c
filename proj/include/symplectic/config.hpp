#pragma once

// Experiment configuration in flat `section.key = value` text.
//
//   model = "fpu"            # harmonic | fpu | lj | matrix
//   model.L = 32
//   integrator.method = "rkg"
//   integrator.tau = 0.1
//   carleman.N = "auto"
//   seed = 7
//
// Blank lines and `#` comments are ignored. String values may be quoted.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "symplectic/carleman.hpp"
#include "symplectic/models.hpp"
#include "symplectic/rkg.hpp"

namespace symplectic {

struct ModelSpec {
  std::string kind = "harmonic";
  Index particles = 1;
  double stiffness = 1.0;
  double alpha = 0.0;
  double mass = 1.0;
  Boundary boundary = Boundary::fixed;
  double epsilon = 1.0;
  double sigma = 1.0;
  double box = 9.6;
  int spatial_dim = 2;
  std::string q_csv;
  std::string c_csv;

  bool operator==(const ModelSpec&) const = default;
};

struct IntegratorSpec {
  std::string method = "rkg";  // rkg | rk4 | verlet
  int p = 2;
  std::optional<double> tau;
  std::optional<Index> steps;
  std::optional<double> horizon;  // integrator.T
  StageSolver solver = StageSolver::automatic;
  double tol = 1e-12;
  int max_iter = 50;

  bool operator==(const IntegratorSpec&) const = default;
};

struct CarlemanSpec {
  std::optional<int> n_levels;  // empty means auto
  std::optional<double> eps;
  std::optional<double> horizon;  // carleman.T
  CarlemanRoute via = CarlemanRoute::sequential;

  bool operator==(const CarlemanSpec&) const = default;
};

struct InitialSpec {
  std::string kind = "default";  // default | thermal | explicit
  double temperature = 0.5;
  std::vector<double> values;

  bool operator==(const InitialSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  Index stride = 1;

  bool operator==(const OutputSpec&) const = default;
};

struct ExperimentConfig {
  ModelSpec model;
  IntegratorSpec integrator;
  CarlemanSpec carleman;
  InitialSpec initial;
  OutputSpec output;
  std::uint64_t seed = 0;

  bool operator==(const ExperimentConfig&) const = default;

  /// Throws ConfigError on unknown keys, malformed values, duplicate keys or
  /// inconsistent combinations.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  std::string serialize() const;

  /// Cross-field checks: tau * steps = T when all are present, auto N needs
  /// eps, enum-like strings are recognized.
  void validate() const;

  /// (tau, steps) resolved from any two of tau, steps, T.
  std::pair<double, Index> resolved_stepping() const;
};

HamiltonianSystem build_model(const ModelSpec& spec);
Vec build_initial_state(const ExperimentConfig& cfg,
                        const HamiltonianSystem& system);

std::string to_string(Boundary b);
std::string to_string(StageSolver s);
std::string to_string(CarlemanRoute r);

}  // namespace symplectic
