// Command-line front end: fki <kernel|apply|trace|kato|validate|experiment> --config FILE

#include <CLI11.hpp>
#include <fmt/format.h>

#include <iostream>

#include "fki/config.hpp"
#include "fki/output.hpp"
#include "fki/paths.hpp"
#include "fki/validation.hpp"

namespace {

using namespace fki;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailedCheck = 1;
constexpr int kExitConfig = 2;

struct Outputs {
  std::string csv;
  json report;
  bool pass = true;
  std::string summary;
};

json estimate_json(const Estimate& e) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return {{"re", num(e.mean.real())}, {"im", num(e.mean.imag())}, {"stderr", num(e.std_error)},
          {"n_paths", e.n_paths}, {"n_steps", e.n_steps}, {"cap_hits", e.cap_hits}, {"seed", e.seed}};
}

std::vector<Point> start_points(const ExperimentConfig& cfg, const Domain& domain) {
  if (!cfg.run.x.empty()) return cfg.run.x;
  Point origin(cfg.dimension, 0.0);
  if (!domain.contains(origin)) throw ConfigError("run.x is required when the origin is not in the domain");
  return {origin};
}

std::vector<Point> end_points(const ExperimentConfig& cfg, const std::vector<Point>& xs) {
  return cfg.run.y.empty() ? xs : cfg.run.y;
}

std::function<double(PointView)> initial_function(const ApplySection& a) {
  const Point c = a.center;
  const double w = a.width;
  if (a.psi == "one") return [](PointView) { return 1.0; };
  if (a.psi == "bump") {
    return [c, w](PointView x) {
      double r2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
      r2 /= w * w;
      return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
    };
  }
  return [c, w](PointView x) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - c[i]) * (x[i] - c[i]);
    return std::exp(-r2 / (2.0 * w * w));
  };
}

std::string row_id(const std::string& op, std::size_t stream) { return fmt::format("{}-{}", op, stream); }

Outputs run_kernel(const ExperimentConfig& cfg, int workers) {
  const ProblemSpec spec = cfg.problem();
  const auto xs = start_points(cfg, spec.domain);
  const auto ys = end_points(cfg, xs);
  SamplingOptions opt = cfg.sampling(workers);
  std::vector<ResultRow> rows;
  json items = json::array();
  std::size_t stream = 0;
  for (double t : cfg.run.t) {
    for (const auto& x : xs) {
      for (const auto& y : ys) {
        const Estimate e = kernel(spec, t, x, y, opt, static_cast<std::uint32_t>(stream));
        rows.push_back({row_id("kernel", stream), "kernel", t, x, y, e});
        items.push_back({{"run_id", rows.back().run_id}, {"t", t}, {"x", x}, {"y", y}, {"estimate", estimate_json(e)}});
        ++stream;
      }
    }
  }
  Outputs out;
  out.csv = results_csv(rows, cfg.dimension);
  out.report = {{"subcommand", "kernel"}, {"results", items}};
  out.summary = fmt::format("kernel: {} estimate(s), first = {} + {}i (stderr {})", rows.size(),
                            format_double(rows[0].estimate.mean.real()), format_double(rows[0].estimate.mean.imag()),
                            format_double(rows[0].estimate.std_error));
  return out;
}

Outputs run_apply(const ExperimentConfig& cfg, int workers) {
  const ProblemSpec spec = cfg.problem();
  const auto xs = start_points(cfg, spec.domain);
  const auto psi = initial_function(cfg.apply);
  const ComplexFunction f = [psi](PointView z) { return std::complex<double>(psi(z), 0.0); };
  SamplingOptions opt = cfg.sampling(workers);
  std::vector<ResultRow> rows;
  json items = json::array();
  std::size_t stream = 0;
  for (double t : cfg.run.t) {
    for (const auto& x : xs) {
      const Estimate e = apply_semigroup(spec, f, t, x, opt, static_cast<std::uint32_t>(stream));
      rows.push_back({row_id("apply", stream), "apply", t, x, std::nullopt, e});
      items.push_back({{"run_id", rows.back().run_id}, {"t", t}, {"x", x}, {"estimate", estimate_json(e)}});
      ++stream;
    }
  }
  Outputs out;
  out.csv = results_csv(rows, cfg.dimension);
  out.report = {{"subcommand", "apply"}, {"psi", cfg.apply.psi}, {"width", cfg.apply.width}, {"results", items}};
  out.summary = fmt::format("apply: {} estimate(s), first = {} (stderr {})", rows.size(),
                            format_double(rows[0].estimate.mean.real()), format_double(rows[0].estimate.std_error));
  return out;
}

Outputs run_trace(const ExperimentConfig& cfg, int workers) {
  const ProblemSpec spec = cfg.problem();
  SamplingOptions opt = cfg.sampling(workers);
  TraceOptions topt{cfg.trace.cells_per_axis, cfg.trace.box};
  std::vector<ResultRow> rows;
  json items = json::array();
  for (std::size_t i = 0; i < cfg.run.t.size(); ++i) {
    const double t = cfg.run.t[i];
    SamplingOptions o = opt;
    o.seed = opt.seed + i;  // distinct cell streams per t
    const TraceEstimate tr = trace(spec, t, o, topt);
    rows.push_back({row_id("trace", i), "trace", t, std::nullopt, std::nullopt, tr.estimate});
    items.push_back({{"run_id", rows.back().run_id}, {"t", t}, {"estimate", estimate_json(tr.estimate)},
                     {"mc_error", tr.mc_error}, {"quadrature_error", tr.quadrature_error},
                     {"cells_per_axis", tr.cells_per_axis}});
  }
  Outputs out;
  out.csv = results_csv(rows, cfg.dimension);
  out.report = {{"subcommand", "trace"}, {"results", items}};
  out.summary = fmt::format("trace: {} value(s), first = {} (stderr {})", rows.size(),
                            format_double(rows[0].estimate.mean.real()), format_double(rows[0].estimate.std_error));
  return out;
}

Outputs run_kato(const ExperimentConfig& cfg) {
  ScalarField f = ScalarField::zero(cfg.dimension);
  if (cfg.kato.field == "scalar") {
    f = abs(make_scalar(cfg.scalar));
  } else {
    const VectorField a = make_vector(cfg.vector);
    f = cfg.kato.field == "vector_square" ? squared_norm(a) : abs(divergence_field(a));
  }
  KatoQuadrature q;
  q.epsilon_kato = cfg.kato.epsilon;
  std::vector<Point> probes = cfg.kato.probes.empty() ? cfg.run.x : cfg.kato.probes;
  const KatoReport rep = kato_smallness_profile(f, cfg.kato.rho, probes, q);
  std::vector<std::vector<std::string>> rows;
  for (const auto& p : rep.profile) rows.push_back({"kato-0", "kato", format_double(p.rho), format_double(p.value)});
  Outputs out;
  out.csv = table_csv({"run_id", "op", "rho", "value"}, rows);
  out.report = rep.to_json();
  out.report["subcommand"] = "kato";
  out.report["field"] = cfg.kato.field;
  out.summary = fmt::format("kato: verdict {}, kato_norm {}", to_string(rep.verdict), format_double(rep.kato_norm));
  return out;
}

Outputs from_checks(const std::string& subcommand, const std::vector<CheckReport>& checks) {
  Outputs out;
  json list = json::array();
  std::vector<std::vector<std::string>> rows;
  int failed = 0;
  for (const auto& c : checks) {
    list.push_back(c.to_json());
    rows.push_back({c.name, c.pass ? "true" : "false", format_double(c.statistic), format_double(c.threshold)});
    if (!c.pass) ++failed;
  }
  out.pass = failed == 0;
  out.csv = table_csv({"check", "pass", "statistic", "threshold"}, rows);
  out.report = {{"subcommand", subcommand}, {"pass", out.pass}, {"checks", list}};
  out.summary = fmt::format("{}: {}/{} checks passed", subcommand, checks.size() - failed, checks.size());
  return out;
}

std::optional<Point> default_boundary_point(const Domain& domain, PointView x) {
  if (const auto* h = std::get_if<domains::HalfSpace>(&domain.kind())) {
    const double gap = dot(h->normal, x) - h->offset;
    Point p(x.begin(), x.end());
    for (std::size_t c = 0; c < p.size(); ++c) p[c] -= gap * h->normal[c];
    return p;
  }
  if (const auto* b = std::get_if<domains::Ball>(&domain.kind())) {
    Point p(x.size());
    double r = distance(x, b->center);
    for (std::size_t c = 0; c < p.size(); ++c) {
      p[c] = b->center[c] + (r > 0 ? (x[c] - b->center[c]) / r : (c == 0 ? 1.0 : 0.0)) * b->radius;
    }
    return p;
  }
  return std::nullopt;
}

Outputs run_validate(const ExperimentConfig& cfg, int workers) {
  const ProblemSpec spec = cfg.problem();
  const auto xs = start_points(cfg, spec.domain);
  const auto ys = end_points(cfg, xs);
  const SamplingOptions opt = cfg.sampling(workers);
  const auto& wanted = cfg.validate.checks;
  auto enabled = [&](const std::string& name) {
    return wanted.empty() || std::find(wanted.begin(), wanted.end(), name) != wanted.end();
  };
  static const std::vector<std::string> known{"diamagnetic", "hermiticity", "semigroup", "girsanov",
                                               "boundary_vanishing", "domain_monotonicity", "bridge_constructions",
                                               "bridge_line_integral"};
  for (const auto& w : wanted) {
    if (std::find(known.begin(), known.end(), w) == known.end()) throw ConfigError("unknown check '" + w + "'");
  }
  const double t = cfg.run.t.front();
  std::vector<CheckReport> checks;

  std::vector<KernelSample> samples;
  std::vector<std::pair<Point, Point>> pairs;
  for (double tt : cfg.run.t) {
    for (const auto& x : xs) {
      for (const auto& y : ys) samples.push_back({tt, x, y});
    }
  }
  for (const auto& x : xs) {
    for (const auto& y : ys) pairs.emplace_back(x, y);
  }
  if (enabled("diamagnetic")) checks.push_back(check_diamagnetic(spec, samples, opt));
  if (enabled("hermiticity")) checks.push_back(check_hermiticity(spec, pairs, t, opt));
  if (enabled("semigroup")) {
    GridSpec g;
    g.cells_per_axis = cfg.validate.cells_per_axis;
    if (cfg.validate.grid) {
      g.lo = cfg.validate.grid->first;
      g.hi = cfg.validate.grid->second;
    } else {
      const double pad = 5.0 * std::sqrt(t);
      g.lo = g.hi = xs[0];
      for (int c = 0; c < cfg.dimension; ++c) {
        g.lo[c] = std::min(xs[0][c], ys[0][c]) - pad;
        g.hi[c] = std::max(xs[0][c], ys[0][c]) + pad;
      }
    }
    const double s = cfg.validate.s_fraction * t;
    checks.push_back(check_semigroup(spec, s, t - s, xs[0], ys[0], g, opt));
  }
  if (enabled("girsanov")) {
    const double s = cfg.validate.s_fraction * t;
    checks.push_back(check_girsanov("one", [](PointView) { return 1.0; }, s, t, xs[0], ys[0], opt));
    checks.push_back(check_girsanov("coordinate", [](PointView z) { return z[0]; }, s, t, xs[0], ys[0], opt));
    checks.push_back(
        check_girsanov("indicator", [](PointView z) { return z[0] > 0.0 ? 1.0 : 0.0; }, s, t, xs[0], ys[0], opt));
  }
  const bool boundary = spec.domain.has_boundary() && !spec.domain.is_custom();
  if (enabled("boundary_vanishing") && boundary) {
    auto bp = cfg.validate.boundary_point ? cfg.validate.boundary_point : default_boundary_point(spec.domain, xs[0]);
    if (!bp) throw ConfigError("validate.boundary_point is required for this domain");
    checks.push_back(check_boundary_vanishing(spec, *bp, ys[0], cfg.validate.deltas, t, opt));
  }
  if (enabled("domain_monotonicity") && spec.domain.has_boundary()) {
    const ProblemSpec outer(spec.a, spec.v, Domain::full_space(cfg.dimension));
    checks.push_back(check_domain_monotonicity(spec, outer, initial_function(cfg.apply), t, xs, opt));
  }
  if (enabled("bridge_constructions")) checks.push_back(check_bridge_constructions(xs[0], ys[0], t, opt));
  if (enabled("bridge_line_integral") && !spec.a.is_zero()) {
    checks.push_back(check_bridge_line_integral(spec.a, xs[0], ys[0], t, opt));
  }
  if (checks.empty()) throw ConfigError("no applicable checks selected");
  return from_checks("validate", checks);
}

GridSpec experiment_grid(const ExperimentConfig& cfg) {
  GridSpec g;
  g.cells_per_axis = cfg.experiment.cells_per_axis;
  if (cfg.experiment.grid) {
    g.lo = cfg.experiment.grid->first;
    g.hi = cfg.experiment.grid->second;
  } else {
    g.lo = g.hi = cfg.apply.center;
    for (int c = 0; c < cfg.dimension; ++c) {
      g.lo[c] -= 1.5 * cfg.apply.width;
      g.hi[c] += 1.5 * cfg.apply.width;
    }
  }
  return g;
}

Outputs run_experiment(const ExperimentConfig& cfg, int workers) {
  const auto& e = cfg.experiment;
  const ProblemSpec spec = cfg.problem();
  const SamplingOptions opt = cfg.sampling(workers);
  const double t = cfg.run.t.front();
  if (e.kind == "soft_kill") {
    const auto xs = start_points(cfg, spec.domain);
    const auto ys = end_points(cfg, xs);
    return from_checks("experiment", {soft_kill_convergence(spec.domain, e.mu, e.n_sequence, t, xs[0], ys[0], opt)});
  }
  if (e.kind == "strong_continuity") {
    if (e.t_sequence.empty()) throw ConfigError("experiment.t_sequence is required");
    const double thr = e.threshold > 0 ? e.threshold : Defaults::continuity_threshold;
    return from_checks("experiment", {strong_continuity_experiment(spec, initial_function(cfg.apply), e.p,
                                                                    e.t_sequence, experiment_grid(cfg), opt, thr)});
  }
  if (e.kind == "potential_convergence") {
    std::vector<ProblemSpec> approx;
    for (double h : e.h_sequence) {
      if (cfg.vector.kind != "landau") throw ConfigError("h_sequence needs a landau vector potential");
      VectorField a = make_landau(h, cfg.dimension);
      a.with_cap(cfg.run.v_max);
      approx.emplace_back(a, spec.v, spec.domain, spec.killing);
    }
    for (double r : e.r_sequence) {
      ScalarField v = mollify(make_scalar(cfg.scalar), r, e.big_r);
      v.with_cap(cfg.run.v_max);
      approx.emplace_back(spec.a, v, spec.domain, spec.killing);
    }
    if (approx.empty()) throw ConfigError("potential_convergence needs h_sequence or r_sequence");
    const auto xs = start_points(cfg, spec.domain);
    const auto ys = end_points(cfg, xs);
    std::vector<KernelSample> samples;
    for (double tt : cfg.run.t) {
      for (const auto& x : xs) {
        for (const auto& y : ys) samples.push_back({tt, x, y});
      }
    }
    ConvergenceOptions copt;
    if (e.threshold > 0) copt.threshold = e.threshold;
    return from_checks("experiment", {potential_convergence_experiment(spec, approx, samples, opt, copt)});
  }
  if (e.kind == "regularity") {
    if (e.boundary_points.empty()) throw ConfigError("experiment.boundary_points is required");
    const double thr = e.threshold > 0 ? e.threshold : Defaults::regularity_threshold;
    return from_checks("experiment", {regularity_probe(spec.domain, e.boundary_points, t, e.tau_sequence, opt, thr)});
  }
  if (e.kind == "escape") {
    const ProbabilityEstimate p =
        escape_probability(cfg.dimension, e.radius, t, opt.n_paths, opt.steps_for(t), opt.seed, opt.exec);
    Outputs out;
    out.csv = table_csv({"run_id", "op", "r", "t", "value", "stderr", "n_paths", "n_steps", "seed"},
                        {{"escape-0", "escape", format_double(e.radius), format_double(t), format_double(p.value),
                          format_double(p.std_error), std::to_string(p.n_paths), std::to_string(opt.steps_for(t)),
                          std::to_string(opt.seed)}});
    out.report = {{"subcommand", "experiment"}, {"kind", "escape"}, {"r", e.radius}, {"t", t},
                  {"value", p.value}, {"stderr", p.std_error}, {"note", "grid maximum: lower bound"}};
    out.summary = fmt::format("escape: P = {} (stderr {})", format_double(p.value), format_double(p.std_error));
    return out;
  }
  if (e.kind == "khasminskii") {
    const auto xs = start_points(cfg, spec.domain);
    const KhasminskiiResult k = khasminskii_bound(spec.v, t, xs, opt);
    const ProblemSpec bare(VectorField::zero(cfg.dimension), spec.v, Domain::full_space(cfg.dimension));
    double direct = -kInf, direct_se = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Estimate d = apply_semigroup(bare, [](PointView) { return std::complex<double>(1.0, 0.0); }, t, xs[i],
                                         opt, static_cast<std::uint32_t>(i));
      if (d.mean.real() > direct) direct = d.mean.real(), direct_se = d.std_error;
    }
    CheckReport r;
    r.name = "khasminskii";
    r.statistic = direct - 3.0 * direct_se - k.bound;
    r.threshold = 0.0;
    r.pass = k.available && r.statistic <= r.threshold;
    r.details = {{"alpha", k.alpha}, {"alpha_stderr", k.alpha_std_error}, {"available", k.available},
                 {"bound", k.available ? json(k.bound) : json(nullptr)}, {"direct_sup", direct},
                 {"direct_stderr", direct_se}};
    return from_checks("experiment", {r});
  }
  if (e.kind == "kato_functional") {
    const auto xs = start_points(cfg, spec.domain);
    const MonteCarloValue m =
        brownian_kato_functional(spec.v, t, xs, opt.n_paths, opt.steps_for(t), opt.seed, opt.exec);
    Outputs out;
    out.csv = table_csv({"run_id", "op", "t", "value", "stderr", "n_paths", "n_steps", "seed"},
                        {{"kato_functional-0", "kato_functional", format_double(t), format_double(m.value),
                          format_double(m.std_error), std::to_string(opt.n_paths), std::to_string(opt.steps_for(t)),
                          std::to_string(opt.seed)}});
    out.report = {{"subcommand", "experiment"}, {"kind", "kato_functional"}, {"t", t}, {"value", m.value},
                  {"stderr", m.std_error}, {"argmax", m.argmax}};
    out.summary = fmt::format("kato_functional: {} (stderr {})", format_double(m.value), format_double(m.std_error));
    return out;
  }
  throw ConfigError("experiment.kind must be one of soft_kill, strong_continuity, potential_convergence, "
                    "regularity, escape, khasminskii, kato_functional");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo Feynman-Kac-Ito estimators for magnetic Schroedinger semigroups"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int workers = 1;
  std::optional<std::int64_t> seed;
  std::string which;
  for (const char* name : {"kernel", "apply", "trace", "kato", "validate", "experiment"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "TOML experiment file")->required();
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory (overrides [output].dir)");
    sub->add_option("--seed", seed, "global seed (overrides [run].seed)")->check(CLI::NonNegativeNumber);
    sub->callback([&which, name] { which = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  Outputs out;
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
    if (seed) cfg.run.seed = static_cast<std::uint64_t>(*seed);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (which == "kernel") out = run_kernel(cfg, workers);
    else if (which == "apply") out = run_apply(cfg, workers);
    else if (which == "trace") out = run_trace(cfg, workers);
    else if (which == "kato") out = run_kato(cfg);
    else if (which == "validate") out = run_validate(cfg, workers);
    else out = run_experiment(cfg, workers);
  } catch (const std::exception& e) {
    std::cerr << "fki " << which << ": error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    const std::filesystem::path dir(cfg.output_dir);
    write_file(dir, "results.csv", out.csv);
    write_file(dir, "report.json", json_text(out.report));
    write_file(dir, "manifest.json", json_text(manifest(cfg.echo, which, cfg.run.seed, cfg.run.shards)));
  } catch (const std::exception& e) {
    std::cerr << "fki " << which << ": error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::cout << out.summary << "\n";
  return out.pass ? kExitOk : kExitFailedCheck;
}
