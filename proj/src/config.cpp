#include "symplectic/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "symplectic/errors.hpp"
#include "symplectic/experiments.hpp"
#include "symplectic/io.hpp"

namespace symplectic {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string quote(const std::string& s) { return "\"" + s + "\""; }

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected, std::size_t line) {
  std::ostringstream os;
  os << "line " << line << ": field '" << key << "' has invalid value '"
     << value << "' (expected " << expected << ")";
  throw ConfigError(os.str(), key, line);
}

double to_double(const std::string& key, const std::string& v, std::size_t line) {
  double out = 0.0;
  const char* first = v.data();
  if (!v.empty() && v[0] == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    bad_value(key, v, "a finite number", line);
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& v,
                     std::size_t line) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    bad_value(key, v, "an integer", line);
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v,
                     std::size_t line) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    bad_value(key, v, "an unsigned 64-bit integer", line);
  }
  return out;
}

Boundary to_boundary(const std::string& key, const std::string& v,
                     std::size_t line) {
  if (v == "fixed") return Boundary::fixed;
  if (v == "fixed_free") return Boundary::fixed_free;
  if (v == "free") return Boundary::free;
  bad_value(key, v, "fixed | fixed_free | free", line);
}

StageSolver to_solver(const std::string& key, const std::string& v,
                      std::size_t line) {
  if (v == "auto") return StageSolver::automatic;
  if (v == "newton") return StageSolver::newton;
  if (v == "fixed_point") return StageSolver::fixed_point;
  bad_value(key, v, "auto | newton | fixed_point", line);
}

CarlemanRoute to_route(const std::string& key, const std::string& v,
                       std::size_t line) {
  if (v == "sequential") return CarlemanRoute::sequential;
  if (v == "history") return CarlemanRoute::history;
  bad_value(key, v, "sequential | history", line);
}

std::vector<double> to_list(const std::string& key, const std::string& v,
                            std::size_t line) {
  std::vector<double> out;
  std::istringstream is(v);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) bad_value(key, v, "a comma-separated list of numbers", line);
    out.push_back(to_double(key, cell, line));
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, std::size_t)> set;
  // empty optional means "omit from serialization"
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

const std::vector<std::pair<std::string, Field>>& fields() {
  using C = ExperimentConfig;
  using S = std::string;
  using O = std::optional<std::string>;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"model", {[](C& c, const S& v, std::size_t) { c.model.kind = v; },
                 [](const C& c) -> O { return quote(c.model.kind); }}},
      {"model.L",
       {[](C& c, const S& v, std::size_t l) { c.model.particles = to_integer("model.L", v, l); },
        [](const C& c) -> O { return std::to_string(c.model.particles); }}},
      {"model.k",
       {[](C& c, const S& v, std::size_t l) { c.model.stiffness = to_double("model.k", v, l); },
        [](const C& c) -> O { return format_double(c.model.stiffness); }}},
      {"model.alpha",
       {[](C& c, const S& v, std::size_t l) { c.model.alpha = to_double("model.alpha", v, l); },
        [](const C& c) -> O { return format_double(c.model.alpha); }}},
      {"model.m",
       {[](C& c, const S& v, std::size_t l) { c.model.mass = to_double("model.m", v, l); },
        [](const C& c) -> O { return format_double(c.model.mass); }}},
      {"model.boundary",
       {[](C& c, const S& v, std::size_t l) { c.model.boundary = to_boundary("model.boundary", v, l); },
        [](const C& c) -> O { return quote(to_string(c.model.boundary)); }}},
      {"model.epsilon",
       {[](C& c, const S& v, std::size_t l) { c.model.epsilon = to_double("model.epsilon", v, l); },
        [](const C& c) -> O { return format_double(c.model.epsilon); }}},
      {"model.sigma",
       {[](C& c, const S& v, std::size_t l) { c.model.sigma = to_double("model.sigma", v, l); },
        [](const C& c) -> O { return format_double(c.model.sigma); }}},
      {"model.box",
       {[](C& c, const S& v, std::size_t l) { c.model.box = to_double("model.box", v, l); },
        [](const C& c) -> O { return format_double(c.model.box); }}},
      {"model.dim",
       {[](C& c, const S& v, std::size_t l) {
          c.model.spatial_dim = static_cast<int>(to_integer("model.dim", v, l));
        },
        [](const C& c) -> O { return std::to_string(c.model.spatial_dim); }}},
      {"model.q_csv", {[](C& c, const S& v, std::size_t) { c.model.q_csv = v; },
                       [](const C& c) -> O { return quote(c.model.q_csv); }}},
      {"model.c_csv", {[](C& c, const S& v, std::size_t) { c.model.c_csv = v; },
                       [](const C& c) -> O { return quote(c.model.c_csv); }}},
      {"integrator.method",
       {[](C& c, const S& v, std::size_t) { c.integrator.method = v; },
        [](const C& c) -> O { return quote(c.integrator.method); }}},
      {"integrator.p",
       {[](C& c, const S& v, std::size_t l) {
          c.integrator.p = static_cast<int>(to_integer("integrator.p", v, l));
        },
        [](const C& c) -> O { return std::to_string(c.integrator.p); }}},
      {"integrator.tau",
       {[](C& c, const S& v, std::size_t l) { c.integrator.tau = to_double("integrator.tau", v, l); },
        [](const C& c) -> O {
          return c.integrator.tau ? O(format_double(*c.integrator.tau)) : O();
        }}},
      {"integrator.steps",
       {[](C& c, const S& v, std::size_t l) {
          c.integrator.steps = to_integer("integrator.steps", v, l);
        },
        [](const C& c) -> O {
          return c.integrator.steps ? O(std::to_string(*c.integrator.steps)) : O();
        }}},
      {"integrator.T",
       {[](C& c, const S& v, std::size_t l) { c.integrator.horizon = to_double("integrator.T", v, l); },
        [](const C& c) -> O {
          return c.integrator.horizon ? O(format_double(*c.integrator.horizon)) : O();
        }}},
      {"integrator.solver",
       {[](C& c, const S& v, std::size_t l) {
          c.integrator.solver = to_solver("integrator.solver", v, l);
        },
        [](const C& c) -> O { return quote(to_string(c.integrator.solver)); }}},
      {"integrator.tol",
       {[](C& c, const S& v, std::size_t l) { c.integrator.tol = to_double("integrator.tol", v, l); },
        [](const C& c) -> O { return format_double(c.integrator.tol); }}},
      {"integrator.max_iter",
       {[](C& c, const S& v, std::size_t l) {
          c.integrator.max_iter = static_cast<int>(to_integer("integrator.max_iter", v, l));
        },
        [](const C& c) -> O { return std::to_string(c.integrator.max_iter); }}},
      {"carleman.N",
       {[](C& c, const S& v, std::size_t l) {
          if (v == "auto") {
            c.carleman.n_levels.reset();
          } else {
            c.carleman.n_levels = static_cast<int>(to_integer("carleman.N", v, l));
          }
        },
        [](const C& c) -> O {
          return c.carleman.n_levels ? std::to_string(*c.carleman.n_levels)
                                     : quote("auto");
        }}},
      {"carleman.eps",
       {[](C& c, const S& v, std::size_t l) { c.carleman.eps = to_double("carleman.eps", v, l); },
        [](const C& c) -> O {
          return c.carleman.eps ? O(format_double(*c.carleman.eps)) : O();
        }}},
      {"carleman.T",
       {[](C& c, const S& v, std::size_t l) { c.carleman.horizon = to_double("carleman.T", v, l); },
        [](const C& c) -> O {
          return c.carleman.horizon ? O(format_double(*c.carleman.horizon)) : O();
        }}},
      {"carleman.via",
       {[](C& c, const S& v, std::size_t l) { c.carleman.via = to_route("carleman.via", v, l); },
        [](const C& c) -> O { return quote(to_string(c.carleman.via)); }}},
      {"initial.kind", {[](C& c, const S& v, std::size_t) { c.initial.kind = v; },
                        [](const C& c) -> O { return quote(c.initial.kind); }}},
      {"initial.temperature",
       {[](C& c, const S& v, std::size_t l) {
          c.initial.temperature = to_double("initial.temperature", v, l);
        },
        [](const C& c) -> O { return format_double(c.initial.temperature); }}},
      {"initial.values",
       {[](C& c, const S& v, std::size_t l) { c.initial.values = to_list("initial.values", v, l); },
        [](const C& c) -> O {
          return c.initial.values.empty() ? O() : O(quote(join(c.initial.values)));
        }}},
      {"output.dir", {[](C& c, const S& v, std::size_t) { c.output.dir = v; },
                      [](const C& c) -> O { return quote(c.output.dir); }}},
      {"output.stride",
       {[](C& c, const S& v, std::size_t l) { c.output.stride = to_integer("output.stride", v, l); },
        [](const C& c) -> O { return std::to_string(c.output.stride); }}},
      {"seed",
       {[](C& c, const S& v, std::size_t l) { c.seed = to_u64("seed", v, l); },
        [](const C& c) -> O { return std::to_string(c.seed); }}},
  };
  return table;
}

}  // namespace

std::string to_string(Boundary b) {
  switch (b) {
    case Boundary::fixed: return "fixed";
    case Boundary::fixed_free: return "fixed_free";
    case Boundary::free: return "free";
  }
  return "fixed";
}

std::string to_string(StageSolver s) {
  switch (s) {
    case StageSolver::automatic: return "auto";
    case StageSolver::newton: return "newton";
    case StageSolver::fixed_point: return "fixed_point";
  }
  return "auto";
}

std::string to_string(CarlemanRoute r) {
  return r == CarlemanRoute::history ? "history" : "sequential";
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  std::map<std::string, const Field*> lookup;
  for (const auto& [key, field] : fields()) lookup[key] = &field;
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    // strip comments outside quotes
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                            ": expected 'key = value'",
                        "", lineno);
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (!value.empty() && (value.front() == '"' || value.back() == '"')) {
      throw ConfigError("line " + std::to_string(lineno) + ": field '" + key +
                            "' has an unterminated string",
                        key, lineno);
    }
    const auto it = lookup.find(key);
    if (it == lookup.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown field '" +
                            key + "'",
                        key, lineno);
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": field '" + key +
                            "' given twice",
                        key, lineno);
    }
    it->second->set(cfg, value, lineno);
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path, "--config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  for (const auto& [key, field] : fields()) {
    if (auto v = field.get(*this)) out += key + " = " + *v + '\n';
  }
  return out;
}

void ExperimentConfig::validate() const {
  static const std::set<std::string> models{"harmonic", "fpu", "lj", "matrix"};
  static const std::set<std::string> methods{"rkg", "rk4", "verlet"};
  static const std::set<std::string> initials{"default", "thermal", "explicit"};
  if (!models.count(model.kind)) {
    throw ConfigError("field 'model' must be harmonic | fpu | lj | matrix, got '" +
                          model.kind + "'",
                      "model");
  }
  if (!methods.count(integrator.method)) {
    throw ConfigError("field 'integrator.method' must be rkg | rk4 | verlet, got '" +
                          integrator.method + "'",
                      "integrator.method");
  }
  if (!initials.count(initial.kind)) {
    throw ConfigError(
        "field 'initial.kind' must be default | thermal | explicit, got '" +
            initial.kind + "'",
        "initial.kind");
  }
  if (model.kind == "matrix" && model.q_csv.empty()) {
    throw ConfigError("model = matrix requires model.q_csv", "model.q_csv");
  }
  if (integrator.p < 1 || integrator.p > 16) {
    throw ConfigError("field 'integrator.p' must lie in [1, 16]", "integrator.p");
  }
  if (integrator.tau && !(*integrator.tau > 0.0)) {
    throw ConfigError("field 'integrator.tau' must be positive", "integrator.tau");
  }
  if (integrator.steps && *integrator.steps < 0) {
    throw ConfigError("field 'integrator.steps' must be >= 0", "integrator.steps");
  }
  if (integrator.horizon && !(*integrator.horizon > 0.0)) {
    throw ConfigError("field 'integrator.T' must be positive", "integrator.T");
  }
  if (integrator.tau && integrator.steps && integrator.horizon) {
    const double t = *integrator.tau * static_cast<double>(*integrator.steps);
    if (std::abs(t - *integrator.horizon) > 1e-9 * std::max(1.0, *integrator.horizon)) {
      throw ConfigError("integrator.tau * integrator.steps != integrator.T",
                        "integrator.T");
    }
  }
  if (output.stride < 1) {
    throw ConfigError("field 'output.stride' must be >= 1", "output.stride");
  }
  if (carleman.n_levels && *carleman.n_levels < 1) {
    throw ConfigError("field 'carleman.N' must be >= 1 or \"auto\"", "carleman.N");
  }
  if (carleman.eps && !(*carleman.eps > 0.0)) {
    throw ConfigError("field 'carleman.eps' must be positive", "carleman.eps");
  }
  if (carleman.horizon && !(*carleman.horizon > 0.0)) {
    throw ConfigError("field 'carleman.T' must be positive", "carleman.T");
  }
}

std::pair<double, Index> ExperimentConfig::resolved_stepping() const {
  const auto& it = integrator;
  if (it.tau && it.steps) return {*it.tau, *it.steps};
  if (it.tau && it.horizon) {
    const double raw = *it.horizon / *it.tau;
    const Index steps = static_cast<Index>(std::llround(raw));
    if (std::abs(raw - static_cast<double>(steps)) > 1e-9 * std::max(1.0, raw)) {
      throw ConfigError("integrator.T is not a multiple of integrator.tau",
                        "integrator.T");
    }
    return {*it.tau, steps};
  }
  if (it.steps && it.horizon) {
    if (*it.steps == 0) throw ConfigError("integrator.steps is zero", "integrator.steps");
    return {*it.horizon / static_cast<double>(*it.steps), *it.steps};
  }
  throw ConfigError("two of integrator.tau, integrator.steps, integrator.T are required",
                    "integrator.tau");
}

HamiltonianSystem build_model(const ModelSpec& spec) {
  if (spec.kind == "harmonic") {
    return make_harmonic_chain(spec.particles, spec.stiffness, spec.mass,
                               spec.boundary);
  }
  if (spec.kind == "fpu") {
    return make_fpu_chain(spec.particles, spec.stiffness, spec.alpha, spec.mass,
                          spec.boundary);
  }
  if (spec.kind == "lj") {
    LennardJonesParams prm;
    prm.particles = spec.particles;
    prm.epsilon = spec.epsilon;
    prm.sigma = spec.sigma;
    prm.box = spec.box;
    prm.spatial_dim = spec.spatial_dim;
    prm.mass = spec.mass;
    return make_lennard_jones(prm);
  }
  if (spec.kind == "matrix") return load_matrix_model(spec.q_csv, spec.c_csv);
  throw ConfigError("unknown model '" + spec.kind + "'", "model");
}

Vec build_initial_state(const ExperimentConfig& cfg,
                        const HamiltonianSystem& system) {
  const Index n = state_dim(system);
  const auto& init = cfg.initial;
  if (init.kind == "explicit") {
    if (static_cast<Index>(init.values.size()) != n) {
      throw ConfigError("initial.values has " +
                            std::to_string(init.values.size()) +
                            " entries, the model state has " + std::to_string(n),
                        "initial.values");
    }
    return Eigen::Map<const Vec>(init.values.data(), n);
  }
  if (cfg.model.kind == "lj") {
    LennardJonesParams prm;
    prm.particles = cfg.model.particles;
    prm.epsilon = cfg.model.epsilon;
    prm.sigma = cfg.model.sigma;
    prm.box = cfg.model.box;
    prm.spatial_dim = cfg.model.spatial_dim;
    prm.mass = cfg.model.mass;
    return lj_thermal_state(prm, init.temperature, cfg.seed);
  }
  if (init.kind == "thermal") {
    const Index d = n / 2;
    Vec masses(d);
    if (const auto* s = std::get_if<SeparableForceSystem>(&system)) {
      masses = s->masses;
    } else {
      masses = as_separable(system).masses;
    }
    return thermal_state(Vec::Zero(d), masses, init.temperature, cfg.seed);
  }
  return carleman_default_state(n);
}

}  // namespace symplectic
