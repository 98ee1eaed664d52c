#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "symplectic/config.hpp"
#include "symplectic/errors.hpp"

using namespace symplectic;

namespace {

std::string field_of(const std::string& text) {
  try {
    ExperimentConfig::parse(text);
  } catch (const ConfigError& e) {
    return e.field() + "@" + std::to_string(e.line());
  }
  return "none";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("parse a complete file") {
  const std::string text = R"(# FPU bench
model = "fpu"
model.L = 32
model.alpha = 0.25   # cubic coupling
model.boundary = fixed
integrator.method = "rkg"
integrator.p = 2
integrator.tau = 0.1
integrator.steps = 100000
integrator.solver = fixed_point
carleman.N = auto
carleman.eps = 1e-4
initial.kind = thermal
initial.temperature = 0.5
output.dir = "runs/fpu #1"
output.stride = 100
seed = 42
)";
  const auto cfg = ExperimentConfig::parse(text);
  CHECK(cfg.model.kind == "fpu");
  CHECK(cfg.model.particles == 32);
  CHECK(cfg.model.alpha == 0.25);
  CHECK(*cfg.integrator.tau == 0.1);
  CHECK(*cfg.integrator.steps == 100000);
  CHECK(cfg.integrator.solver == StageSolver::fixed_point);
  CHECK_FALSE(cfg.carleman.n_levels.has_value());
  CHECK(*cfg.carleman.eps == 1e-4);
  CHECK(cfg.output.dir == "runs/fpu #1");
  CHECK(cfg.seed == 42);
  const auto [tau, steps] = cfg.resolved_stepping();
  CHECK(tau == 0.1);
  CHECK(steps == 100000);
}

TEST_CASE("round trip") {
  ExperimentConfig a;
  CHECK(ExperimentConfig::parse(a.serialize()) == a);

  a.model.kind = "lj";
  a.model.particles = 64;
  a.model.box = 9.6;
  a.integrator.method = "verlet";
  a.integrator.tau = 0.005;
  a.integrator.horizon = 0.05;
  a.integrator.tol = 1.0 / 3.0;
  a.carleman.n_levels = 4;
  a.carleman.via = CarlemanRoute::history;
  a.initial.kind = "explicit";
  a.initial.values = {0.1, -2.5e-7, 1.0 / 7.0};
  a.output.dir = "out dir";
  a.seed = 18446744073709551615ull;
  const auto b = ExperimentConfig::parse(a.serialize());
  CHECK(b == a);
  CHECK(b.serialize() == a.serialize());
}

TEST_CASE("errors name the field and line") {
  CHECK(field_of("model = \"fpu\"\nmodel.bogus = 1\n") == "model.bogus@2");
  CHECK(field_of("seed = 1\nseed = 2\n") == "seed@2");
  CHECK(field_of("\n\nintegrator.tau = fast\n") == "integrator.tau@3");
  CHECK(field_of("model = \"fpu\n") == "model@1");
  CHECK(field_of("model.L 3\n") == "@1");
  CHECK(field_of("integrator.method = \"leapfrog\"\n") == "integrator.method@0");
  CHECK(field_of("integrator.tau = 0.1\nintegrator.steps = 10\nintegrator.T = 2\n") ==
        "integrator.T@0");
  CHECK(field_of("model.boundary = open\n") == "model.boundary@1");
  CHECK(field_of("integrator.p = 20\n") == "integrator.p@0");
  CHECK(field_of("model = \"matrix\"\n") == "model.q_csv@0");
}

TEST_CASE("stepping resolution") {
  auto cfg = ExperimentConfig::parse("integrator.tau = 0.25\nintegrator.T = 10\n");
  CHECK(cfg.resolved_stepping().second == 40);
  cfg = ExperimentConfig::parse("integrator.steps = 8\nintegrator.T = 2\n");
  CHECK(cfg.resolved_stepping().first == 0.25);
  cfg = ExperimentConfig::parse("integrator.tau = 0.3\nintegrator.T = 1\n");
  CHECK_THROWS_AS(cfg.resolved_stepping(), ConfigError);
  cfg = ExperimentConfig::parse("integrator.tau = 0.3\n");
  CHECK_THROWS_AS(cfg.resolved_stepping(), ConfigError);
}

TEST_CASE("models and initial states") {
  auto cfg = ExperimentConfig::parse("model = harmonic\nmodel.L = 3\n");
  auto sys = build_model(cfg.model);
  CHECK(std::holds_alternative<QuadraticHamiltonian>(sys));
  CHECK(build_initial_state(cfg, sys).size() == 6);

  cfg = ExperimentConfig::parse(
      "model = fpu\nmodel.L = 4\ninitial.kind = thermal\nseed = 5\n");
  sys = build_model(cfg.model);
  const Vec a = build_initial_state(cfg, sys);
  const Vec b = build_initial_state(cfg, sys);
  CHECK(a == b);
  CHECK(a.head(4).norm() == 0.0);
  CHECK(std::abs(a.tail(4).sum()) < 1e-14);
  cfg.seed = 6;
  CHECK(build_initial_state(cfg, sys) != a);

  cfg = ExperimentConfig::parse(
      "model = lj\nmodel.L = 16\nmodel.box = 8\ninitial.kind = thermal\n");
  sys = build_model(cfg.model);
  CHECK(build_initial_state(cfg, sys).size() == 64);

  cfg = ExperimentConfig::parse("initial.kind = explicit\ninitial.values = \"1, 2, 3\"\n");
  CHECK_THROWS_AS(build_initial_state(cfg, build_model(cfg.model)), ConfigError);
}

TEST_CASE("matrix models from CSV") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "symplectic_config_test";
  fs::create_directories(dir);
  {
    std::ofstream q(dir / "q.csv");
    q << "i,j,value\n0,0,0.5\n1,1,0.5\n";
    std::ofstream c(dir / "c.csv");
    c << "0,0,0,0.1\n";
    std::ofstream bad(dir / "bad.csv");
    bad << "0,0,zero\n";
  }
  auto sys = load_matrix_model((dir / "q.csv").string(), (dir / "c.csv").string());
  REQUIRE(std::holds_alternative<CubicHamiltonian>(sys));
  Vec x(2);
  x << 1.0, 0.0;
  CHECK(evaluate_energy(sys, x) == doctest::Approx(0.6));
  sys = load_matrix_model((dir / "q.csv").string());
  CHECK(std::holds_alternative<QuadraticHamiltonian>(sys));
  CHECK_THROWS_AS(load_matrix_model((dir / "bad.csv").string()), ConfigError);
  CHECK_THROWS_AS(load_matrix_model((dir / "missing.csv").string()), ConfigError);
  fs::remove_all(dir);
}

}  // TEST_SUITE
