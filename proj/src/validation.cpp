#include "fki/validation.hpp"

#include <algorithm>

#include "fki/analytic.hpp"
#include "fki/paths.hpp"
#include "fki/statistics.hpp"
#include "fki/stochastics.hpp"

namespace fki {

namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json point_json(PointView x) { return json(std::vector<double>(x.begin(), x.end())); }

json estimate_json(const Estimate& e) {
  return {{"re", e.mean.real()}, {"im", e.mean.imag()}, {"stderr", e.std_error}, {"n_paths", e.n_paths},
          {"n_steps", e.n_steps}, {"cap_hits", e.cap_hits}, {"seed", e.seed}};
}

CheckReport make_report(std::string name, double statistic, double threshold, json details) {
  CheckReport r;
  r.name = std::move(name);
  r.statistic = statistic;
  r.threshold = threshold;
  r.pass = statistic <= threshold;
  r.details = std::move(details);
  return r;
}

// |a - b| in units of s; a zero-noise comparison yields 0 or +infinity.
double zscore(double diff, double s) {
  if (s > 0.0) return std::abs(diff) / s;
  return diff == 0.0 ? 0.0 : kInf;
}

std::uint64_t cell_count(int m, int d) {
  std::uint64_t total = 1;
  for (int c = 0; c < d; ++c) total *= static_cast<std::uint64_t>(m);
  return total;
}

struct GridCell {
  Point centre;
  bool block_centre;
};

std::vector<GridCell> midpoint_cells(const GridSpec& g, int d, double& cell_volume) {
  require_dimension(g.lo, d, "grid lower corner");
  require_dimension(g.hi, d, "grid upper corner");
  const int m = g.cells_per_axis;
  if (m < 3 || m % 3 != 0) throw ParameterError("cells_per_axis must be a positive multiple of 3");
  const std::uint64_t total = cell_count(m, d);
  if (total >= (std::uint64_t(1) << 22)) throw ParameterError("grid is too large");
  cell_volume = 1.0;
  std::vector<double> h(d);
  for (int c = 0; c < d; ++c) {
    h[c] = (g.hi[c] - g.lo[c]) / m;
    if (!(h[c] > 0.0)) throw ParameterError("grid must have positive extent");
    cell_volume *= h[c];
  }
  std::vector<GridCell> cells;
  cells.reserve(total);
  for (std::uint64_t k = 0; k < total; ++k) {
    std::uint64_t rem = k;
    GridCell cell{Point(d), true};
    for (int c = 0; c < d; ++c) {
      const int i = static_cast<int>(rem % m);
      rem /= m;
      cell.centre[c] = g.lo[c] + (i + 0.5) * h[c];
      cell.block_centre = cell.block_centre && i % 3 == 1;
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

ProblemSpec without_vector_potential(const ProblemSpec& spec) {
  return ProblemSpec(VectorField::zero(spec.dimension()), spec.v, spec.domain, spec.killing);
}

// Survival on the window of grid indices m..n: positions inside, corrected
// factors over the pairs (i, i+1) with i >= start_pair.
double window_survival(const Domain& domain, const Path& path, int first, int start_pair, KillingMode mode) {
  const int n = path.n_steps();
  for (int i = first; i <= n; ++i) {
    if (!domain.contains(path[i])) return 0.0;
  }
  if (mode == KillingMode::naive) return 1.0;
  const double dt = path.dt();
  double prev = domain.boundary_distance(path[start_pair]);
  double factor = 1.0;
  for (int i = start_pair + 1; i <= n; ++i) {
    const double next = domain.boundary_distance(path[i]);
    factor *= -std::expm1(-2.0 * prev * next / dt);
    prev = next;
  }
  return factor;
}

}  // namespace

json CheckReport::to_json() const {
  return {{"name", name}, {"pass", pass}, {"statistic", num(statistic)}, {"threshold", num(threshold)},
          {"details", details}};
}

CheckReport check_diamagnetic(const ProblemSpec& spec, const std::vector<KernelSample>& samples,
                              const SamplingOptions& opt) {
  if (samples.empty()) throw ParameterError("no sample points");
  const ProblemSpec bare = without_vector_potential(spec);
  double worst = -kInf;
  json rows = json::array();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto stream = static_cast<std::uint32_t>(i);
    const Estimate ka = kernel(spec, s.t, s.x, s.y, opt, stream);
    const Estimate k0 = kernel(bare, s.t, s.x, s.y, opt, stream);
    const double mod = std::abs(ka.mean);
    const double ref = k0.mean.real();
    const double excess = ref > 0.0 ? (mod - ref) / ref : (mod > 0.0 ? kInf : 0.0);
    worst = std::max(worst, excess);
    rows.push_back({{"t", s.t}, {"x", point_json(s.x)}, {"y", point_json(s.y)}, {"abs_k_a", mod}, {"k_0", ref},
                    {"ratio", ref > 0.0 ? num(mod / ref) : json(nullptr)}, {"margin", ref - mod}});
  }
  return make_report("diamagnetic", worst, kPathwiseRounding,
                     {{"samples", rows}, {"statistic", "max (|k_A| - k_0) / k_0, shared seeds"}});
}

CheckReport check_domain_monotonicity(const ProblemSpec& inner, const ProblemSpec& outer,
                                      const std::function<double(PointView)>& psi, double t,
                                      const std::vector<Point>& points, const SamplingOptions& opt) {
  if (points.empty()) throw ParameterError("no sample points");
  auto f = [&psi](PointView z) {
    const double v = psi(z);
    if (v < 0.0) throw ParameterError("domain monotonicity needs psi >= 0");
    return std::complex<double>(v, 0.0);
  };
  double worst = -kInf;
  json rows = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto stream = static_cast<std::uint32_t>(i);
    const Estimate a = apply_semigroup(inner, f, t, points[i], opt, stream);
    const Estimate b = apply_semigroup(outer, f, t, points[i], opt, stream);
    const double ua = a.mean.real(), ub = b.mean.real();
    const double excess = ub > 0.0 ? (ua - ub) / ub : (ua > 0.0 ? kInf : 0.0);
    worst = std::max(worst, excess);
    rows.push_back({{"x", point_json(points[i])}, {"inner", ua}, {"outer", ub}, {"margin", ub - ua}});
  }
  return make_report("domain_monotonicity", worst, kPathwiseRounding,
                     {{"t", t}, {"samples", rows}, {"statistic", "max (u_inner - u_outer) / u_outer, shared seeds"}});
}

CheckReport check_hermiticity(const ProblemSpec& spec, const std::vector<std::pair<Point, Point>>& pairs, double t,
                              const SamplingOptions& opt) {
  if (pairs.empty()) throw ParameterError("no sample pairs");
  double worst = 0.0;
  json rows = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    const Estimate kxy = kernel(spec, t, x, y, opt, static_cast<std::uint32_t>(2 * i));
    const Estimate kyx = kernel(spec, t, y, x, opt, static_cast<std::uint32_t>(2 * i + 1));
    const double diff = std::abs(kxy.mean - std::conj(kyx.mean));
    double z = zscore(diff, std::hypot(kxy.std_error, kyx.std_error));
    json row = {{"x", point_json(x)}, {"y", point_json(y)}, {"k_xy", estimate_json(kxy)},
                {"k_yx", estimate_json(kyx)}, {"z", num(z)}};
    if (x == y) {
      const double zi = std::max(zscore(kxy.mean.imag(), kxy.im_std_error), zscore(kyx.mean.imag(), kyx.im_std_error));
      row["z_imag_diagonal"] = num(zi);
      z = std::max(z, zi);
    }
    worst = std::max(worst, z);
    rows.push_back(std::move(row));
  }
  return make_report("hermiticity", worst, 3.0, {{"t", t}, {"pairs", rows}});
}

CheckReport check_semigroup(const ProblemSpec& spec, double s, double t, PointView x, PointView y,
                            const GridSpec& grid, const SamplingOptions& opt) {
  const int d = spec.dimension();
  double vol = 0.0;
  const auto cells = midpoint_cells(grid, d, vol);
  std::complex<double> fine{0, 0}, coarse{0, 0};
  double var = 0.0;
  std::size_t used = 0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Point& z = cells[c].centre;
    if (!spec.domain.contains(z)) continue;
    ++used;
    const Estimate a = kernel(spec, s, x, z, opt, static_cast<std::uint32_t>(2 * c));
    const Estimate b = kernel(spec, t, z, y, opt, static_cast<std::uint32_t>(2 * c + 1));
    const std::complex<double> prod = a.mean * b.mean;
    fine += prod * vol;
    if (cells[c].block_centre) coarse += prod * (vol * std::pow(3.0, d));
    var += vol * vol * (std::norm(b.mean) * a.std_error * a.std_error + std::norm(a.mean) * b.std_error * b.std_error);
  }
  const Estimate direct = kernel(spec, s + t, x, y, opt, static_cast<std::uint32_t>(2 * cells.size()));
  const double q_err = std::abs(fine - coarse) / 8.0;
  const double se = std::hypot(direct.std_error, std::sqrt(var));
  const double diff = std::abs(direct.mean - fine);
  const double denom = 3.0 * se + q_err;
  const double stat = denom > 0.0 ? diff / denom : (diff == 0.0 ? 0.0 : kInf);
  return make_report("semigroup", stat, 1.0,
                     {{"s", s},
                      {"t", t},
                      {"x", point_json(x)},
                      {"y", point_json(y)},
                      {"direct", estimate_json(direct)},
                      {"convolution_re", fine.real()},
                      {"convolution_im", fine.imag()},
                      {"convolution_stderr", std::sqrt(var)},
                      {"quadrature_error", q_err},
                      {"grid_cells_in_domain", used},
                      {"statistic", "|k_{s+t} - conv| / (3 SE + quadrature error)"}});
}

CheckReport check_girsanov(const std::string& name, const std::function<double(PointView)>& f, double s, double t,
                           PointView x, PointView y, const SamplingOptions& opt) {
  if (!(s > 0.0 && s < t)) throw ParameterError("girsanov check needs 0 < s < t");
  if (opt.n_paths < 2) throw ParameterError("n_paths must be at least 2");
  require_dimension(y, static_cast<int>(x.size()), "girsanov endpoint");
  const int n = opt.steps_for(t);
  const double mf = s / t * n;
  const int m = static_cast<int>(std::lround(mf));
  if (std::abs(mf - m) > 1e-9 * n || m < 1 || m >= n) throw ParameterError("s must fall on the time grid");
  const int d = static_cast<int>(x.size());
  const double gap2 = [&] {
    double a = 0.0;
    for (int c = 0; c < d; ++c) a += (x[c] - y[c]) * (x[c] - y[c]);
    return a;
  }();
  const double pre = std::pow(t / (t - s), 0.5 * d) * std::exp(gap2 / (2.0 * t));

  auto bridge_parts = run_sharded(opt.n_paths, opt.exec, RunningStats{}, [&](std::uint64_t b, std::uint64_t e, RunningStats& st) {
    Path path;
    for (std::uint64_t k = b; k < e; ++k) {
      PathSampler::bridge(path, x, y, t, n, StreamId{opt.seed, 0, k});
      st.add(f(path[m]));
    }
  });
  auto free_parts = run_sharded(opt.n_paths, opt.exec, RunningStats{}, [&](std::uint64_t b, std::uint64_t e, RunningStats& st) {
    Path path;
    for (std::uint64_t k = b; k < e; ++k) {
      PathSampler::brownian(path, x, s, m, StreamId{opt.seed, 1, k});
      auto w = path[m];
      double r2 = 0.0;
      for (int c = 0; c < d; ++c) r2 += (w[c] - y[c]) * (w[c] - y[c]);
      st.add(pre * f(w) * std::exp(-r2 / (2.0 * (t - s))));
    }
  });
  const RunningStats lhs = merge_all(bridge_parts), rhs = merge_all(free_parts);
  const double z = zscore(lhs.mean - rhs.mean, std::hypot(lhs.std_error(), rhs.std_error()));
  return make_report("girsanov_" + name, z, 3.0,
                     {{"functional", name},
                      {"s", s},
                      {"t", t},
                      {"x", point_json(x)},
                      {"y", point_json(y)},
                      {"bridge_mean", lhs.mean},
                      {"bridge_stderr", lhs.std_error()},
                      {"weighted_mean", rhs.mean},
                      {"weighted_stderr", rhs.std_error()},
                      {"n_paths", opt.n_paths},
                      {"n_steps", n},
                      {"seed", opt.seed}});
}

CheckReport check_boundary_vanishing(const ProblemSpec& spec, PointView boundary_point, PointView y,
                                     const std::vector<double>& deltas, double t, const SamplingOptions& opt) {
  const int d = spec.dimension();
  require_dimension(boundary_point, d, "boundary point");
  if (!spec.domain.has_boundary() || spec.domain.is_custom()) {
    return make_report("boundary_vanishing", kInf, 3.0,
                       {{"note", spec.domain.has_boundary() ? "no built-in boundary normal" : "no boundary"}});
  }
  if (deltas.empty()) throw ParameterError("approach sequence is empty");
  for (std::size_t k = 1; k < deltas.size(); ++k) {
    if (!(deltas[k] < deltas[k - 1])) throw ParameterError("approach distances must decrease");
  }
  Point inward = spec.domain.exterior_cone_axis(boundary_point);
  const double len = norm(inward);
  for (double& c : inward) c = -c / len;

  const auto* half = std::get_if<domains::HalfSpace>(&spec.domain.kind());
  const bool image_oracle = half && spec.a.is_zero() && spec.v.is_zero() && spec.killing == KillingMode::corrected;

  double worst = 0.0;
  json rows = json::array();
  std::vector<Estimate> est;
  for (double delta : deltas) {
    Point x(d);
    for (int c = 0; c < d; ++c) x[c] = boundary_point[c] + delta * inward[c];
    const Estimate k = kernel(spec, t, x, y, opt, 0);
    json row = {{"delta", delta}, {"x", point_json(x)}, {"k", estimate_json(k)},
                {"ratio_to_free", k.mean.real() / analytic::free_kernel(t, x, y)}};
    if (!est.empty()) {
      const Estimate& prev = est.back();
      const double rise = k.mean.real() - prev.mean.real();
      const double z = rise > 0.0 ? zscore(rise, std::hypot(k.std_error, prev.std_error)) : 0.0;
      row["z_increase"] = num(z);
      worst = std::max(worst, z);
    }
    if (image_oracle) {
      const double exact = analytic::half_space_kernel(t, x, y, half->normal, half->offset);
      const double z = zscore(k.mean.real() - exact, k.std_error);
      row["image_kernel"] = exact;
      row["z_image"] = num(z);
      worst = std::max(worst, z);
    }
    est.push_back(k);
    rows.push_back(std::move(row));
  }
  return make_report("boundary_vanishing", worst, 3.0,
                     {{"t", t},
                      {"boundary_point", point_json(boundary_point)},
                      {"y", point_json(y)},
                      {"sequence", rows},
                      {"last_over_first", est.front().mean.real() != 0.0
                                              ? num(est.back().mean.real() / est.front().mean.real())
                                              : json(nullptr)}});
}

CheckReport potential_convergence_experiment(const ProblemSpec& base, const std::vector<ProblemSpec>& approximants,
                                             const std::vector<KernelSample>& samples, const SamplingOptions& opt,
                                             const ConvergenceOptions& copt) {
  if (approximants.empty()) throw ParameterError("approximant sequence is empty");
  if (samples.empty()) throw ParameterError("no sample points");
  std::vector<Estimate> ref;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    ref.push_back(kernel(base, s.t, s.x, s.y, opt, static_cast<std::uint32_t>(i)));
  }
  std::vector<double> sups;
  json seq = json::array();
  for (const auto& spec : approximants) {
    double sup = 0.0, se_at_sup = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      const Estimate k = kernel(spec, s.t, s.x, s.y, opt, static_cast<std::uint32_t>(i));
      const double diff = std::abs(k.mean - ref[i].mean);
      if (diff >= sup) {
        sup = diff;
        se_at_sup = std::hypot(k.std_error, ref[i].std_error);
      }
    }
    sups.push_back(sup);
    seq.push_back({{"sup_difference", sup}, {"combined_stderr", se_at_sup}});
  }
  bool monotone = true;
  for (std::size_t k = 1; k < sups.size(); ++k) monotone = monotone && sups[k] <= sups[k - 1] * (1.0 + kPathwiseRounding);
  json pts = json::array();
  for (const auto& s : samples) pts.push_back({{"t", s.t}, {"x", point_json(s.x)}, {"y", point_json(s.y)}});
  return make_report("potential_convergence", monotone ? sups.back() : kInf, copt.threshold,
                     {{"sequence", seq}, {"monotone", monotone}, {"sample_set", pts},
                      {"note", "supremum over the finite sample set"}});
}

CheckReport soft_kill_convergence(const Domain& domain, double mu, const std::vector<double>& n_sequence, double t,
                                  PointView x, PointView y, const SamplingOptions& opt) {
  if (!(mu > 0.0)) throw ParameterError("coupling mu must be positive");
  if (n_sequence.empty()) throw ParameterError("n sequence is empty");
  for (std::size_t k = 1; k < n_sequence.size(); ++k) {
    if (!(n_sequence[k] > n_sequence[k - 1])) throw ParameterError("n sequence must increase");
  }
  const int d = domain.dimension();
  const ScalarField u_inf = make_penalty(domain, kInf);
  const ScalarField inside(
      d, [u_inf](PointView z) {
        const double v = u_inf(z);
        return std::isfinite(v) ? v : 0.0;
      },
      "penalty_inside");
  const ProblemSpec limit(VectorField::zero(d), scale(inside, mu), domain, KillingMode::naive);
  const Estimate ref = kernel(limit, t, x, y, opt, 0);

  std::vector<Estimate> est;
  json seq = json::array();
  bool monotone = true;
  for (double n : n_sequence) {
    const ProblemSpec soft(VectorField::zero(d), scale(make_penalty(domain, n), mu), Domain::full_space(d));
    est.push_back(kernel(soft, t, x, y, opt, 0));
    if (est.size() > 1) {
      monotone = monotone && est.back().mean.real() <= est[est.size() - 2].mean.real() * (1.0 + kPathwiseRounding);
    }
    seq.push_back({{"n", n}, {"k", estimate_json(est.back())}});
  }
  const double z = zscore(est.back().mean.real() - ref.mean.real(), std::hypot(est.back().std_error, ref.std_error));
  json details = {{"mu", mu}, {"t", t}, {"x", point_json(x)}, {"y", point_json(y)}, {"sequence", seq},
                  {"monotone", monotone}, {"hard_kill", estimate_json(ref)}, {"z_final", num(z)}};
  if (const auto* half = std::get_if<domains::HalfSpace>(&domain.kind())) {
    details["dirichlet_image_kernel"] = analytic::half_space_kernel(t, x, y, half->normal, half->offset);
  }
  return make_report("soft_kill", monotone ? z : kInf, 3.0, std::move(details));
}

CheckReport strong_continuity_experiment(const ProblemSpec& spec, const std::function<double(PointView)>& psi,
                                         double p, const std::vector<double>& t_sequence, const GridSpec& grid,
                                         const SamplingOptions& opt, double threshold) {
  if (!(p >= 1.0)) throw ParameterError("p must be at least 1");
  if (t_sequence.empty()) throw ParameterError("t sequence is empty");
  for (std::size_t k = 0; k < t_sequence.size(); ++k) {
    if (!(t_sequence[k] >= 0.0)) throw ParameterError("t values must be nonnegative");
    if (k > 0 && !(t_sequence[k] < t_sequence[k - 1])) throw ParameterError("t sequence must decrease");
  }
  const int d = spec.dimension();
  double vol = 0.0;
  const auto cells = midpoint_cells(grid, d, vol);
  const double t_max = t_sequence.front();
  SamplingOptions fixed = opt;
  fixed.n_steps = opt.steps_for(t_max > 0.0 ? t_max : 1.0);
  auto f = [&psi](PointView z) { return std::complex<double>(psi(z), 0.0); };

  std::vector<double> norms;
  json seq = json::array();
  for (double t : t_sequence) {
    double acc = 0.0;
    if (t > 0.0) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const Point& z = cells[c].centre;
        const double target = psi(z);
        std::complex<double> u{0.0, 0.0};
        if (spec.domain.contains(z)) u = apply_semigroup(spec, f, t, z, fixed, static_cast<std::uint32_t>(c)).mean;
        acc += std::pow(std::abs(u - target), p) * vol;
      }
    }
    norms.push_back(std::pow(acc, 1.0 / p));
    seq.push_back({{"t", t}, {"norm", norms.back()}});
  }
  bool monotone = true;
  for (std::size_t k = 1; k < norms.size(); ++k) monotone = monotone && norms[k] <= norms[k - 1];
  return make_report("strong_continuity", monotone ? norms.back() : kInf, threshold,
                     {{"p", p}, {"sequence", seq}, {"monotone", monotone}, {"n_steps", fixed.n_steps},
                      {"grid_lo", point_json(grid.lo)}, {"grid_hi", point_json(grid.hi)},
                      {"cells_per_axis", grid.cells_per_axis}});
}

CheckReport regularity_probe(const Domain& domain, const std::vector<Point>& boundary_points, double t,
                             const std::vector<double>& tau_sequence, const SamplingOptions& opt, double threshold) {
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  if (boundary_points.empty()) throw ParameterError("no boundary points");
  if (opt.n_paths < 2) throw ParameterError("n_paths must be at least 2");
  const int n = opt.steps_for(t);
  const double dt = t / n;
  std::vector<int> starts;
  for (double tau : tau_sequence) {
    if (!(tau > 0.0 && tau < t)) throw ParameterError("tau values must lie in (0, t)");
    starts.push_back(std::max(1, static_cast<int>(std::ceil(tau / dt - 1e-9))));
  }
  const KillingMode mode = domain.default_killing();
  double worst = 0.0;
  json rows = json::array();
  for (std::size_t g = 0; g < boundary_points.size(); ++g) {
    const Point& x = boundary_points[g];
    require_dimension(x, domain.dimension(), "boundary point");
    std::vector<RunningStats> init(starts.size() + 1);
    auto parts = run_sharded(opt.n_paths, opt.exec, init, [&](std::uint64_t b, std::uint64_t e, std::vector<RunningStats>& st) {
      Path path;
      for (std::uint64_t k = b; k < e; ++k) {
        PathSampler::brownian(path, x, t, n, StreamId{opt.seed, static_cast<std::uint32_t>(g), k});
        st[0].add(window_survival(domain, path, 1, 0, mode));
        for (std::size_t j = 0; j < starts.size(); ++j) st[j + 1].add(window_survival(domain, path, starts[j], starts[j], mode));
      }
    });
    std::vector<RunningStats> all(starts.size() + 1);
    for (const auto& part : parts) {
      for (std::size_t j = 0; j < all.size(); ++j) all[j].merge(part[j]);
    }
    json trend = json::array();
    for (std::size_t j = 0; j < starts.size(); ++j) {
      trend.push_back({{"tau", tau_sequence[j]}, {"estimate", all[j + 1].mean}, {"stderr", all[j + 1].std_error()}});
    }
    worst = std::max(worst, all[0].mean);
    rows.push_back({{"x", point_json(x)}, {"direct", all[0].mean}, {"direct_stderr", all[0].std_error()},
                    {"delayed", trend}, {"classification", all[0].mean <= threshold ? "regular" : "irregular"}});
  }
  return make_report("regularity_probe", worst, threshold,
                     {{"domain", domain.name()}, {"t", t}, {"killing", to_string(mode)}, {"points", rows},
                      {"n_steps", n}, {"n_paths", opt.n_paths}});
}

CheckReport check_bridge_constructions(PointView x, PointView y, double t, const SamplingOptions& opt) {
  const int d = static_cast<int>(x.size());
  require_dimension(y, d, "bridge endpoint");
  if (opt.n_paths < 2) throw ParameterError("n_paths must be at least 2");
  int n = opt.steps_for(t);
  n += n % 2;
  const int mid = n / 2;
  struct Moments {
    std::vector<RunningStats> coord;
  };
  const Moments init{std::vector<RunningStats>(d)};
  auto collect = [&](bool drift) {
    auto parts = run_sharded(opt.n_paths, opt.exec, init, [&](std::uint64_t b, std::uint64_t e, Moments& st) {
      Path path, driver;
      for (std::uint64_t k = b; k < e; ++k) {
        const StreamId id{opt.seed, drift ? 1u : 0u, k};
        if (drift) {
          PathSampler::bridge_by_drift(path, driver, x, y, t, n, id);
        } else {
          PathSampler::bridge(path, x, y, t, n, id);
        }
        for (int c = 0; c < d; ++c) st.coord[c].add(path[mid][c]);
      }
    });
    Moments all{std::vector<RunningStats>(d)};
    for (const auto& p : parts) {
      for (int c = 0; c < d; ++c) all.coord[c].merge(p.coord[c]);
    }
    return all;
  };
  const Moments a = collect(false), b = collect(true);
  const double exact_var = 0.25 * t;
  const double nn = static_cast<double>(opt.n_paths);
  double worst = 0.0;
  json rows = json::array();
  for (int c = 0; c < d; ++c) {
    const auto& ca = a.coord[c];
    const auto& cb = b.coord[c];
    const double zm = zscore(ca.mean - cb.mean, std::hypot(ca.std_error(), cb.std_error()));
    const double sv = std::sqrt(2.0 / nn) * std::hypot(ca.variance(), cb.variance());
    const double zv = zscore(ca.variance() - cb.variance(), sv);
    worst = std::max({worst, zm, zv});
    rows.push_back({{"coordinate", c}, {"conditional_mean", ca.mean}, {"drift_mean", cb.mean},
                    {"exact_mean", 0.5 * (x[c] + y[c])}, {"conditional_variance", ca.variance()},
                    {"drift_variance", cb.variance()}, {"exact_variance", exact_var}, {"z_mean", zm}, {"z_variance", zv}});
  }
  return make_report("bridge_constructions", worst, 3.0,
                     {{"s", 0.5 * t}, {"t", t}, {"n_steps", n}, {"n_paths", opt.n_paths}, {"coordinates", rows}});
}

CheckReport check_bridge_line_integral(const VectorField& a, PointView x, PointView y, double t,
                                       const SamplingOptions& opt) {
  const int d = a.dimension();
  require_dimension(x, d, "bridge start");
  require_dimension(y, d, "bridge endpoint");
  if (opt.n_paths < 2) throw ParameterError("n_paths must be at least 2");
  const int n = opt.steps_for(t);
  struct Acc {
    RunningStats re1, im1, re2, im2, gap;
  };
  auto parts = run_sharded(opt.n_paths, opt.exec, Acc{}, [&](std::uint64_t b, std::uint64_t e, Acc& st) {
    Path bridge, driver;
    for (std::uint64_t k = b; k < e; ++k) {
      PathSampler::bridge_by_drift(bridge, driver, x, y, t, n, StreamId{opt.seed, 0, k});
      const double i1 = ito_integral(a, bridge);
      const double i2 = bridge_ito_integral_drift_form(a, bridge, driver);
      st.re1.add(std::cos(i1));
      st.im1.add(-std::sin(i1));
      st.re2.add(std::cos(i2));
      st.im2.add(-std::sin(i2));
      st.gap.add(std::abs(i1 - i2));
    }
  });
  Acc all;
  for (const auto& p : parts) {
    all.re1.merge(p.re1);
    all.im1.merge(p.im1);
    all.re2.merge(p.re2);
    all.im2.merge(p.im2);
    all.gap.merge(p.gap);
  }
  const double diff = std::hypot(all.re1.mean - all.re2.mean, all.im1.mean - all.im2.mean);
  const double se = std::sqrt(all.re1.variance() / all.re1.n + all.im1.variance() / all.im1.n +
                              all.re2.variance() / all.re2.n + all.im2.variance() / all.im2.n);
  const double z = zscore(diff, se);
  return make_report("bridge_line_integral", z, 3.0,
                     {{"increment_form_re", all.re1.mean},
                      {"increment_form_im", all.im1.mean},
                      {"drift_form_re", all.re2.mean},
                      {"drift_form_im", all.im2.mean},
                      {"mean_abs_gap", all.gap.mean},
                      {"n_steps", n},
                      {"n_paths", opt.n_paths}});
}

}  // namespace fki
