#include "fki/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace fki {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

const json* find(const json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) fail(what + " must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback) {
  const json* v = find(j, key);
  return v ? number(*v, key) : fallback;
}

std::int64_t integer_or(const json& j, const std::string& key, std::int64_t fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(key + " must be an integer");
  return v->get<std::int64_t>();
}

std::string string_or(const json& j, const std::string& key, const std::string& fallback) {
  const json* v = find(j, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(key + " must be a string");
  return v->get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& what) {
  if (v.is_number()) return {v.get<double>()};
  if (!v.is_array()) fail(what + " must be a number or an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(number(e, what));
  return out;
}

std::vector<double> numbers_or(const json& j, const std::string& key, std::vector<double> fallback) {
  const json* v = find(j, key);
  return v ? numbers(*v, key) : fallback;
}

Point point(const json& v, int d, const std::string& what) {
  Point p = numbers(v, what);
  if (static_cast<int>(p.size()) != d) {
    fail(what + " has dimension " + std::to_string(p.size()) + ", expected " + std::to_string(d));
  }
  return p;
}

// A single point [a, b] or a list of points [[a, b], ...].
std::vector<Point> points_or(const json& j, const std::string& key, int d) {
  const json* v = find(j, key);
  if (!v) return {};
  if (!v->is_array()) fail(key + " must be a point or a list of points");
  if (!v->empty() && (*v)[0].is_number()) return {point(*v, d, key)};
  std::vector<Point> out;
  for (const auto& e : *v) out.push_back(point(e, d, key));
  return out;
}

std::optional<std::pair<Point, Point>> box_or(const json& j, const std::string& lo, const std::string& hi, int d) {
  const json* a = find(j, lo);
  const json* b = find(j, hi);
  if (!a && !b) return std::nullopt;
  if (!a || !b) fail(lo + " and " + hi + " must be given together");
  return std::make_pair(point(*a, d, lo), point(*b, d, hi));
}

void check_keys(const json& j, const std::string& section, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail("[" + section + "] must be a table");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) fail("unknown key '" + it.key() + "' in [" + section + "]");
  }
}

PotentialSpec potential(const json& j, int d, const std::optional<Domain>& domain, const std::string& section) {
  PotentialSpec spec;
  spec.dimension = d;
  if (!j.is_object()) fail("[" + section + "] must be a table");
  spec.kind = string_or(j, "kind", "zero");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "kind") continue;
    spec.params[it.key()] = number(it.value(), section + "." + it.key());
  }
  if (spec.kind == "penalty") spec.domain = domain;
  return spec;
}

KillingMode killing_mode(const std::string& s) {
  if (s == "naive") return KillingMode::naive;
  if (s == "corrected") return KillingMode::corrected;
  fail("killing must be 'naive' or 'corrected', got '" + s + "'");
}

}  // namespace

Domain make_domain(const std::string& kind, int d, const json& p) {
  auto need = [&](const std::string& key) -> const json& {
    const json* v = find(p, key);
    if (!v) fail("domain '" + kind + "' needs '" + key + "'");
    return *v;
  };
  if (kind == "full_space") return Domain::full_space(d);
  if (kind == "half_space") {
    return Domain::half_space(point(need("normal"), d, "domain.normal"), number_or(p, "offset", 0.0));
  }
  if (kind == "ball") {
    return Domain::ball(point(need("center"), d, "domain.center"), number(need("radius"), "domain.radius"));
  }
  if (kind == "box") return Domain::box(point(need("lo"), d, "domain.lo"), point(need("hi"), d, "domain.hi"));
  if (kind == "complement_of_ball") {
    return Domain::complement_of_ball(point(need("center"), d, "domain.center"),
                                      number(need("radius"), "domain.radius"));
  }
  if (kind == "slit_plane") {
    if (d != 2) fail("slit_plane is a planar domain");
    return make_slit_plane();
  }
  if (kind == "punctured_space") return make_punctured_space(point(need("point"), d, "domain.point"));
  fail("unknown domain kind '" + kind + "'");
}

ProblemSpec ExperimentConfig::problem() const {
  const Domain dom = domain ? *domain : Domain::full_space(dimension);
  ScalarField v = make_scalar(scalar);
  VectorField a = make_vector(vector);
  if (!v.is_zero()) v.with_cap(run.v_max);
  if (!a.is_zero()) a.with_cap(run.v_max);
  if (run.killing) return ProblemSpec(std::move(a), std::move(v), dom, *run.killing);
  return ProblemSpec(std::move(a), std::move(v), dom);
}

SamplingOptions ExperimentConfig::sampling(int workers) const {
  SamplingOptions o;
  o.n_paths = run.n_paths;
  o.n_steps = run.n_steps;
  o.seed = run.seed;
  o.exec.workers = std::max(1, workers);
  o.exec.shards = run.shards;
  return o;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  json root;
  try {
    toml::table tbl = toml::parse(text, source);
    std::ostringstream os;
    os << toml::json_formatter(tbl);
    root = json::parse(os.str());
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    fail(os.str());
  } catch (const json::exception& e) {
    fail(std::string("cannot convert config: ") + e.what());
  }
  check_keys(root, "root", {"problem", "run", "output", "apply", "trace", "kato", "validate", "experiment"});

  ExperimentConfig cfg;
  cfg.echo = root;
  const json empty = json::object();
  const json& problem = find(root, "problem") ? root["problem"] : empty;
  check_keys(problem, "problem", {"dimension", "domain", "scalar", "vector"});
  cfg.dimension = static_cast<int>(integer_or(problem, "dimension", 2));
  const int d = cfg.dimension;
  if (d < 2) fail("dimension must be at least 2");

  try {
    if (const json* dj = find(problem, "domain")) {
      if (!dj->is_object()) fail("[problem.domain] must be a table");
      cfg.domain = make_domain(string_or(*dj, "kind", "full_space"), d, *dj);
    }
    cfg.scalar = potential(find(problem, "scalar") ? problem["scalar"] : json::object(), d, cfg.domain, "problem.scalar");
    cfg.vector = potential(find(problem, "vector") ? problem["vector"] : json::object(), d, cfg.domain, "problem.vector");

    const json& run = find(root, "run") ? root["run"] : empty;
    check_keys(run, "run", {"t", "x", "y", "n_paths", "n_steps", "seed", "killing", "v_max", "shards"});
    auto& r = cfg.run;
    r.t = numbers_or(run, "t", {1.0});
    for (double t : r.t) {
      if (!(t > 0.0) || !std::isfinite(t)) fail("run.t values must be positive");
    }
    r.x = points_or(run, "x", d);
    r.y = points_or(run, "y", d);
    const auto n_paths = integer_or(run, "n_paths", static_cast<std::int64_t>(Defaults::n_paths));
    if (n_paths < 2) fail("run.n_paths must be at least 2");
    r.n_paths = static_cast<std::uint64_t>(n_paths);
    r.n_steps = static_cast<int>(integer_or(run, "n_steps", 0));
    if (r.n_steps < 0) fail("run.n_steps must be nonnegative");
    const auto seed = integer_or(run, "seed", 0);
    if (seed < 0) fail("run.seed must be nonnegative");
    r.seed = static_cast<std::uint64_t>(seed);
    if (const json* k = find(run, "killing")) {
      if (!k->is_string()) fail("run.killing must be a string");
      r.killing = killing_mode(k->get<std::string>());
    }
    r.v_max = number_or(run, "v_max", Defaults::v_max);
    if (!(r.v_max > 0.0)) fail("run.v_max must be positive");
    r.shards = static_cast<int>(integer_or(run, "shards", Defaults::shards));
    if (r.shards < 1) fail("run.shards must be positive");

    const json& output = find(root, "output") ? root["output"] : empty;
    check_keys(output, "output", {"dir"});
    cfg.output_dir = string_or(output, "dir", "out");

    const json& apply = find(root, "apply") ? root["apply"] : empty;
    check_keys(apply, "apply", {"psi", "width", "center"});
    cfg.apply.psi = string_or(apply, "psi", "gaussian");
    if (cfg.apply.psi != "one" && cfg.apply.psi != "gaussian" && cfg.apply.psi != "bump") {
      fail("apply.psi must be one of one, gaussian, bump");
    }
    cfg.apply.width = number_or(apply, "width", 1.0);
    if (!(cfg.apply.width > 0.0)) fail("apply.width must be positive");
    cfg.apply.center = find(apply, "center") ? point(apply["center"], d, "apply.center") : Point(d, 0.0);

    const json& trace = find(root, "trace") ? root["trace"] : empty;
    check_keys(trace, "trace", {"cells_per_axis", "box_lo", "box_hi"});
    cfg.trace.cells_per_axis = static_cast<int>(integer_or(trace, "cells_per_axis", Defaults::trace_cells));
    if (cfg.trace.cells_per_axis < 3 || cfg.trace.cells_per_axis % 3) fail("trace.cells_per_axis must be a multiple of 3");
    cfg.trace.box = box_or(trace, "box_lo", "box_hi", d);

    const json& kato = find(root, "kato") ? root["kato"] : empty;
    check_keys(kato, "kato", {"field", "rho", "probes", "epsilon"});
    cfg.kato.field = string_or(kato, "field", "scalar");
    if (cfg.kato.field != "scalar" && cfg.kato.field != "vector_square" && cfg.kato.field != "vector_divergence") {
      fail("kato.field must be scalar, vector_square or vector_divergence");
    }
    cfg.kato.rho = numbers_or(kato, "rho", cfg.kato.rho);
    cfg.kato.probes = points_or(kato, "probes", d);
    cfg.kato.epsilon = number_or(kato, "epsilon", Defaults::kato_epsilon);

    const json& val = find(root, "validate") ? root["validate"] : empty;
    check_keys(val, "validate", {"checks", "s_fraction", "cells_per_axis", "grid_lo", "grid_hi", "boundary_point", "deltas"});
    if (const json* c = find(val, "checks")) {
      if (!c->is_array()) fail("validate.checks must be an array of names");
      for (const auto& e : *c) {
        if (!e.is_string()) fail("validate.checks must be an array of names");
        cfg.validate.checks.push_back(e.get<std::string>());
      }
    }
    cfg.validate.s_fraction = number_or(val, "s_fraction", Defaults::s_split);
    if (!(cfg.validate.s_fraction > 0.0 && cfg.validate.s_fraction < 1.0)) fail("validate.s_fraction must lie in (0, 1)");
    cfg.validate.cells_per_axis = static_cast<int>(integer_or(val, "cells_per_axis", Defaults::grid_cells));
    cfg.validate.grid = box_or(val, "grid_lo", "grid_hi", d);
    if (const json* b = find(val, "boundary_point")) cfg.validate.boundary_point = point(*b, d, "validate.boundary_point");
    cfg.validate.deltas = numbers_or(val, "deltas", cfg.validate.deltas);

    const json& ex = find(root, "experiment") ? root["experiment"] : empty;
    check_keys(ex, "experiment", {"kind", "mu", "n_sequence", "t_sequence", "tau_sequence", "boundary_points",
                                  "r_sequence", "big_r", "h_sequence", "p", "threshold", "cells_per_axis", "grid_lo",
                                  "grid_hi", "radius"});
    auto& e = cfg.experiment;
    e.kind = string_or(ex, "kind", "");
    e.mu = number_or(ex, "mu", 1.0);
    e.n_sequence = numbers_or(ex, "n_sequence", e.n_sequence);
    e.t_sequence = numbers_or(ex, "t_sequence", {});
    e.tau_sequence = numbers_or(ex, "tau_sequence", e.tau_sequence);
    e.boundary_points = points_or(ex, "boundary_points", d);
    e.r_sequence = numbers_or(ex, "r_sequence", {});
    e.big_r = number_or(ex, "big_r", 10.0);
    e.h_sequence = numbers_or(ex, "h_sequence", {});
    e.p = number_or(ex, "p", 2.0);
    e.threshold = number_or(ex, "threshold", 0.0);
    e.cells_per_axis = static_cast<int>(integer_or(ex, "cells_per_axis", Defaults::grid_cells));
    e.grid = box_or(ex, "grid_lo", "grid_hi", d);
    e.radius = number_or(ex, "radius", 1.0);

    // Builds the fields once so parameter errors surface here.
    const ProblemSpec spec = cfg.problem();
    for (const auto& x : r.x) {
      if (!spec.domain.contains(x)) fail("run.x point is not in the domain");
    }
    for (const auto& y : r.y) {
      if (!spec.domain.contains(y)) fail("run.y point is not in the domain");
    }
  } catch (const std::invalid_argument& ex) {
    fail(ex.what());
  }
  return cfg;
}

std::string toml_library_version() {
  return std::to_string(TOML_LIB_MAJOR) + "." + std::to_string(TOML_LIB_MINOR) + "." + std::to_string(TOML_LIB_PATCH);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path);
}

}  // namespace fki
