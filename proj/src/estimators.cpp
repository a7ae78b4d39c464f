#include "fki/estimators.hpp"

#include <fmt/format.h>

#include "fki/analytic.hpp"
#include "fki/paths.hpp"
#include "fki/statistics.hpp"
#include "fki/stochastics.hpp"

namespace fki {

namespace {

struct ComplexStats {
  RunningStats re, im;
  std::uint64_t hits = 0;

  void add(std::complex<double> z) {
    re.add(z.real());
    im.add(z.imag());
  }
  void merge(const ComplexStats& o) {
    re.merge(o.re);
    im.merge(o.im);
    hits += o.hits;
  }
};

Estimate finish(const std::vector<ComplexStats>& parts, double scale, int n_steps, std::uint64_t seed) {
  ComplexStats all;
  for (const auto& p : parts) all.merge(p);
  Estimate e;
  e.mean = {scale * all.re.mean, scale * all.im.mean};
  e.re_std_error = scale * all.re.std_error();
  e.im_std_error = scale * all.im.std_error();
  e.std_error = std::hypot(e.re_std_error, e.im_std_error);
  e.n_paths = all.re.n;
  e.n_steps = n_steps;
  e.cap_hits = all.hits;
  e.seed = seed;
  return e;
}

void check_run(const ProblemSpec& spec, double t, PointView x, const SamplingOptions& opt) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("t must be positive and finite");
  if (opt.n_paths < 2) throw ParameterError("n_paths must be at least 2");
  if (opt.n_steps < 0) throw ParameterError("n_steps must be nonnegative (0 selects the default)");
  require_dimension(x, spec.dimension(), "evaluation point");
}

std::string point_string(PointView x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += fmt::format("{}{:.6g}", i ? ", " : "", x[i]);
  return s + ")";
}

}  // namespace

ProblemSpec::ProblemSpec(VectorField a_, ScalarField v_, Domain domain_)
    : ProblemSpec(std::move(a_), std::move(v_), domain_, domain_.default_killing()) {}

ProblemSpec::ProblemSpec(VectorField a_, ScalarField v_, Domain domain_, KillingMode killing_)
    : a(std::move(a_)), v(std::move(v_)), domain(std::move(domain_)), killing(killing_) {
  if (a.dimension() != domain.dimension() || v.dimension() != domain.dimension()) {
    throw DimensionError("potentials and domain have different dimensions");
  }
}

ProblemSpec ProblemSpec::free(Domain domain) {
  const int d = domain.dimension();
  return ProblemSpec(VectorField::zero(d), ScalarField::zero(d), std::move(domain));
}

int default_n_steps(double t) { return std::max(100, static_cast<int>(std::ceil(t / 1e-3))); }

Estimate apply_semigroup(const ProblemSpec& spec, const ComplexFunction& psi, double t, PointView x,
                         const SamplingOptions& opt, std::uint32_t stream) {
  check_run(spec, t, x, opt);
  if (!spec.domain.contains(x)) throw PreconditionError("start point " + point_string(x) + " is not in the domain");
  const int n = opt.steps_for(t);
  auto parts = run_sharded(opt.n_paths, opt.exec, ComplexStats{}, [&](std::uint64_t b, std::uint64_t e, ComplexStats& st) {
    Path path;
    for (std::uint64_t k = b; k < e; ++k) {
      PathSampler::brownian(path, x, t, n, StreamId{opt.seed, stream, k});
      const SurvivalWeight xi = survival(spec.domain, path, spec.killing);
      if (xi.value == 0.0) {
        st.add(0.0);
        continue;
      }
      const ActionValue s = action(spec.a, spec.v, path);
      st.hits += s.cap_hits;
      const std::complex<double> end = psi(path[n]);
      if (!std::isfinite(end.real()) || !std::isfinite(end.imag())) {
        throw FieldEvaluationError("initial function is not finite at a path endpoint");
      }
      st.add(s.weight() * xi.value * end);
    }
  });
  return finish(parts, 1.0, n, opt.seed);
}

Estimate kernel(const ProblemSpec& spec, double t, PointView x, PointView y, const SamplingOptions& opt,
                std::uint32_t stream) {
  check_run(spec, t, x, opt);
  require_dimension(y, spec.dimension(), "kernel endpoint");
  if (!spec.domain.contains(x)) throw PreconditionError("x = " + point_string(x) + " is not in the domain");
  if (!spec.domain.contains(y)) throw PreconditionError("y = " + point_string(y) + " is not in the domain");
  const int n = opt.steps_for(t);
  if (spec.a.is_zero() && spec.v.is_zero() && !spec.domain.has_boundary()) {
    // every bridge has weight exactly 1
    Estimate e;
    e.mean = analytic::free_kernel(t, x, y);
    e.n_paths = opt.n_paths;
    e.n_steps = n;
    e.seed = opt.seed;
    return e;
  }
  auto parts = run_sharded(opt.n_paths, opt.exec, ComplexStats{}, [&](std::uint64_t b, std::uint64_t e, ComplexStats& st) {
    Path path;
    for (std::uint64_t k = b; k < e; ++k) {
      PathSampler::bridge(path, x, y, t, n, StreamId{opt.seed, stream, k});
      const SurvivalWeight xi = survival(spec.domain, path, spec.killing);
      if (xi.value == 0.0) {
        st.add(0.0);
        continue;
      }
      const ActionValue s = action(spec.a, spec.v, path);
      st.hits += s.cap_hits;
      st.add(s.weight() * xi.value);
    }
  });
  return finish(parts, analytic::free_kernel(t, x, y), n, opt.seed);
}

std::vector<std::vector<Estimate>> kernel_grid(const ProblemSpec& spec, double t, const std::vector<Point>& xs,
                                               const std::vector<Point>& ys, const SamplingOptions& opt) {
  if (xs.size() * ys.size() >= (std::size_t(1) << 24)) throw ParameterError("kernel grid is too large");
  std::vector<std::vector<Estimate>> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      out[i].push_back(kernel(spec, t, xs[i], ys[j], opt, static_cast<std::uint32_t>(i * ys.size() + j)));
    }
  }
  return out;
}

TraceEstimate trace(const ProblemSpec& spec, double t, const SamplingOptions& opt, const TraceOptions& topt) {
  const int m = topt.cells_per_axis;
  if (m < 3 || m % 3 != 0) throw ParameterError("cells_per_axis must be a positive multiple of 3");
  auto box = topt.box ? topt.box : spec.domain.bounding_box();
  if (!box) throw PreconditionError("trace over an unbounded domain needs an integration box");
  const int d = spec.dimension();
  require_dimension(box->first, d, "integration box");
  require_dimension(box->second, d, "integration box");
  std::vector<double> h(d);
  double cell = 1.0;
  for (int c = 0; c < d; ++c) {
    h[c] = (box->second[c] - box->first[c]) / m;
    if (!(h[c] > 0.0)) throw ParameterError("integration box must have positive extent");
    cell *= h[c];
  }
  std::uint64_t total = 1;
  for (int c = 0; c < d; ++c) total *= static_cast<std::uint64_t>(m);
  if (total >= (std::uint64_t(1) << 24)) throw ParameterError("trace grid is too large");

  std::complex<double> fine{0.0, 0.0}, coarse{0.0, 0.0};
  double mc_var = 0.0;
  std::uint64_t hits = 0, paths = 0;
  int n_steps = opt.steps_for(t);
  std::vector<int> idx(d, 0);
  Point x(d);
  for (std::uint64_t cellno = 0; cellno < total; ++cellno) {
    std::uint64_t rem = cellno;
    bool centre_of_block = true;
    for (int c = 0; c < d; ++c) {
      idx[c] = static_cast<int>(rem % m);
      rem /= m;
      x[c] = box->first[c] + (idx[c] + 0.5) * h[c];
      centre_of_block = centre_of_block && idx[c] % 3 == 1;
    }
    if (!spec.domain.contains(x)) continue;
    const Estimate e = kernel(spec, t, x, x, opt, static_cast<std::uint32_t>(cellno));
    fine += e.mean * cell;
    mc_var += (e.std_error * cell) * (e.std_error * cell);
    if (centre_of_block) coarse += e.mean * (cell * std::pow(3.0, d));
    hits += e.cap_hits;
    paths += e.n_paths;
    n_steps = e.n_steps;
  }
  TraceEstimate out;
  out.cells_per_axis = m;
  out.mc_error = std::sqrt(mc_var);
  out.quadrature_error = std::abs(fine - coarse) / 8.0;
  out.estimate.mean = fine;
  out.estimate.std_error = std::hypot(out.mc_error, out.quadrature_error);
  out.estimate.re_std_error = out.estimate.std_error;
  out.estimate.n_paths = paths;
  out.estimate.n_steps = n_steps;
  out.estimate.cap_hits = hits;
  out.estimate.seed = opt.seed;
  return out;
}

KhasminskiiResult khasminskii_bound(const ScalarField& v, double t, const std::vector<Point>& x_grid,
                                    const SamplingOptions& opt) {
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  if (x_grid.empty()) throw ParameterError("x_grid is empty");
  if (opt.n_paths < 2) throw ParameterError("n_paths must be at least 2");
  const ScalarField neg = negative_part(v).with_cap(v.cap());
  const int n = opt.steps_for(t);
  KhasminskiiResult out;
  out.alpha = -kInf;
  for (std::size_t g = 0; g < x_grid.size(); ++g) {
    const Point& x = x_grid[g];
    require_dimension(x, v.dimension(), "khasminskii grid point");
    auto parts = run_sharded(opt.n_paths, opt.exec, RunningStats{}, [&](std::uint64_t b, std::uint64_t e, RunningStats& st) {
      Path path;
      for (std::uint64_t k = b; k < e; ++k) {
        PathSampler::brownian(path, x, t, n, StreamId{opt.seed, static_cast<std::uint32_t>(g), k});
        st.add(time_integral(neg, path));
      }
    });
    const RunningStats st = merge_all(parts);
    if (st.mean > out.alpha) {
      out.alpha = st.mean;
      out.alpha_std_error = st.std_error();
      out.argmax = x;
    }
  }
  out.available = out.alpha < 1.0;
  out.bound = out.available ? 1.0 / (1.0 - out.alpha) : kInf;
  return out;
}

}  // namespace fki
