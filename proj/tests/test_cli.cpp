#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "symplectic/cli.hpp"

using namespace symplectic;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "symplectic");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / ("symplectic_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("integrate writes steps + 1 rows") {
  TempDir dir("integrate");
  const auto cfg = dir.write("run.cfg",
                             "model = harmonic\nintegrator.p = 2\n"
                             "integrator.tau = 0.1\nintegrator.steps = 50\n");
  const auto r = run({"integrate", "--config", cfg.string(), "--out",
                      (dir.path / "out").string()});
  REQUIRE(r.code == kExitOk);
  const std::string csv = slurp(dir.path / "out" / "trajectory.csv");
  CHECK(csv.rfind("t,x_1,x_2\n", 0) == 0);
  CHECK(count_lines(csv) == 52);
  CHECK(csv.find('\r') == std::string::npos);
  const std::string report = slurp(dir.path / "out" / "report.txt");
  CHECK(report.find("kappa_g = ") != std::string::npos);
  CHECK(report.find("kappa_v = ") != std::string::npos);
}

TEST_CASE("invalid method exits with a config error naming the field") {
  TempDir dir("bad_method");
  const auto cfg = dir.write("run.cfg", "integrator.method = \"leapfrog\"\n");
  const auto r = run({"integrate", "--config", cfg.string()});
  CHECK(r.code == kExitConfigError);
  CHECK(r.err.find("integrator.method") != std::string::npos);

  const auto typo = dir.write("typo.cfg", "integrator.tua = 0.1\n");
  const auto t = run({"integrate", "--config", typo.string()});
  CHECK(t.code == kExitConfigError);
  CHECK(t.err.find("line 1") != std::string::npos);
  CHECK(run({"frobnicate"}).code == kExitConfigError);
}

TEST_CASE("identical seeds give byte-identical output") {
  TempDir dir("determinism");
  const auto cfg = dir.write("run.cfg",
                             "model = fpu\nmodel.L = 6\nmodel.alpha = 0.25\n"
                             "initial.kind = thermal\nintegrator.tau = 0.05\n"
                             "integrator.steps = 200\n");
  const auto a = dir.path / "a";
  const auto b = dir.path / "b";
  const auto c = dir.path / "c";
  REQUIRE(run({"integrate", "--config", cfg.string(), "--seed", "7", "--out", a.string()}).code == 0);
  REQUIRE(run({"integrate", "--config", cfg.string(), "--seed", "7", "--out", b.string()}).code == 0);
  REQUIRE(run({"integrate", "--config", cfg.string(), "--seed", "8", "--out", c.string()}).code == 0);
  CHECK(slurp(a / "trajectory.csv") == slurp(b / "trajectory.csv"));
  CHECK(slurp(a / "report.txt") == slurp(b / "report.txt"));
  CHECK(slurp(a / "trajectory.csv") != slurp(c / "trajectory.csv"));
}

TEST_CASE("bench-energy outputs and error paths") {
  TempDir dir("bench");
  const auto cfg = dir.write("bench.cfg",
                             "model = fpu\nmodel.L = 4\nmodel.alpha = 0.25\n"
                             "initial.kind = thermal\nintegrator.tau = 0.05\n"
                             "integrator.steps = 2000\noutput.stride = 20\n");
  const auto r = run({"bench-energy", "--config", cfg.string(), "--out", dir.path.string()});
  REQUIRE(r.code == kExitOk);
  for (const char* m : {"rkg", "rk4", "verlet"}) {
    const std::string csv = slurp(dir.path / (std::string("drift_") + m + ".csv"));
    CHECK(csv.rfind("t,H,rel_drift\n", 0) == 0);
    CHECK(count_lines(csv) == 102);
  }
  CHECK(count_lines(slurp(dir.path / "summary.csv")) == 4);

  const auto empty = dir.write("empty.cfg",
                               "model = fpu\nmodel.L = 4\nintegrator.tau = 0.05\n"
                               "integrator.steps = 0\n");
  const auto e = run({"bench-energy", "--config", empty.string(), "--out", dir.path.string()});
  CHECK(e.code == kExitConfigError);
  CHECK(e.err.find("empty series") != std::string::npos);

  dir.write("q.csv", "0,0,0.5\n1,1,0.5\n");
  dir.write("c.csv", "1,1,1,0.1\n");
  const auto nonsep = dir.write(
      "nonsep.cfg", "model = matrix\nmodel.q_csv = \"" + (dir.path / "q.csv").string() +
                        "\"\nmodel.c_csv = \"" + (dir.path / "c.csv").string() +
                        "\"\nintegrator.tau = 0.1\nintegrator.steps = 10\n");
  const auto v = run({"bench-energy", "--config", nonsep.string(), "--methods", "verlet",
                      "--out", dir.path.string()});
  CHECK(v.code == kExitCapabilityError);
}

TEST_CASE("carleman subcommand") {
  TempDir dir("carleman");
  const auto linear = dir.write("lin.cfg",
                                "model = fpu\nmodel.L = 2\nmodel.alpha = 0\n"
                                "integrator.tau = 0.05\ncarleman.T = 1\n"
                                "carleman.N = auto\ncarleman.eps = 1e-4\n");
  const auto r = run({"carleman", "--config", linear.string(), "--out", dir.path.string()});
  REQUIRE(r.code == kExitOk);
  const std::string report = slurp(dir.path / "carleman_report.txt");
  CHECK(report.find("rr = 0\n") != std::string::npos);
  CHECK(report.find("n_levels = 2\n") != std::string::npos);
  CHECK(count_lines(slurp(dir.path / "carleman_trajectory.csv")) == 22);

  dir.write("q.csv", "0,0,0.5\n1,1,0.5\n");
  dir.write("c.csv", "0,0,0,0.1\n");
  const auto osc = dir.write(
      "osc.cfg", "model = matrix\nmodel.q_csv = \"" + (dir.path / "q.csv").string() +
                     "\"\nmodel.c_csv = \"" + (dir.path / "c.csv").string() +
                     "\"\nintegrator.tau = 0.05\ncarleman.T = 1\ncarleman.eps = 1e-3\n");
  const auto res = run({"carleman", "--config", osc.string(), "--out", dir.path.string()});
  CHECK(res.code == kExitCapabilityError);
  CHECK(res.err.find("resonan") != std::string::npos);
  CHECK(res.err.find("lambda_") != std::string::npos);

  const auto fixed = dir.write("fixed.cfg",
                               "model = fpu\nmodel.L = 2\nmodel.alpha = 0.05\n"
                               "integrator.tau = 0.05\ncarleman.T = 1\ncarleman.N = 3\n");
  const auto f = run({"carleman", "--config", fixed.string(), "--out", dir.path.string()});
  CHECK(f.code == kExitOk);
  CHECK(slurp(dir.path / "carleman_report.txt").find("rr = inf\n") != std::string::npos);

  const auto harmonic = dir.write("harm.cfg", "model = harmonic\nintegrator.tau = 0.1\n"
                                              "carleman.T = 1\ncarleman.N = 2\n");
  CHECK(run({"carleman", "--config", harmonic.string()}).code == kExitCapabilityError);
}

TEST_CASE("verify and the corrupted tableau hook") {
  TempDir dir("verify");
  const auto ok = run({"verify", "--suite", "rkg", "--out", dir.path.string()});
  CHECK(ok.code == kExitOk);
  CHECK(ok.out.rfind("check_name,status,measured,threshold\n", 0) == 0);
  CHECK(ok.out.find(",fail,") == std::string::npos);
  CHECK(fs::exists(dir.path / "verify_rkg.csv"));

  const auto bad = run({"verify", "--suite", "rkg", "--corrupt-tableau"});
  CHECK(bad.code == kExitVerificationFailure);
  CHECK(bad.out.find("step.order,fail,") != std::string::npos);

  CHECK(run({"verify", "--suite", "nope"}).code == kExitConfigError);
}

TEST_CASE("dump-matrix") {
  TempDir dir("dump");
  const auto cfg = dir.write("run.cfg",
                             "model = harmonic\nmodel.L = 2\nintegrator.tau = 0.1\n"
                             "integrator.steps = 5\ncarleman.N = 2\n");
  REQUIRE(run({"dump-matrix", "--config", cfg.string(), "--what", "history",
               "--padding", "2", "--out", dir.path.string()}).code == kExitOk);
  const std::string csv = slurp(dir.path / "history.csv");
  CHECK(csv.rfind("i,j,value\n", 0) == 0);
  // (M + r + 1) identity blocks of 4, M dense 4x4 blocks, r identity blocks
  CHECK(count_lines(csv) == 1 + 8 * 4 + 5 * 16 + 2 * 4);
  CHECK(run({"dump-matrix", "--config", cfg.string(), "--what", "bogus",
             "--out", dir.path.string()}).code == kExitConfigError);
}

}  // TEST_SUITE
