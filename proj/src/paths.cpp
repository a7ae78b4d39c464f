#include "fki/paths.hpp"

#include <ostream>

#include <fmt/format.h>

namespace fki {

namespace {

void check_grid(double t, int n_steps) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("path time t must be positive and finite");
  if (n_steps < 1) throw ParameterError("n_steps must be at least 1");
}

}  // namespace

Path::Path(int dim, double t, int n_steps) : dim_(dim), t_(t), n_(n_steps), pos_(std::size_t(n_steps + 1) * dim) {
  check_grid(t, n_steps);
}

std::pair<Path, Path> Path::split(int mid) const {
  if (mid <= 0 || mid >= n_) throw ParameterError("split index must be interior");
  Path a(dim_, time(mid), mid), b(dim_, t_ - time(mid), n_ - mid);
  a.kind_ = b.kind_ = kind_;
  std::copy(pos_.begin(), pos_.begin() + std::ptrdiff_t(mid + 1) * dim_, a.pos_.begin());
  std::copy(pos_.begin() + std::ptrdiff_t(mid) * dim_, pos_.end(), b.pos_.begin());
  return {std::move(a), std::move(b)};
}

Path Path::reversed() const {
  Path r(dim_, t_, n_);
  r.kind_ = kind_;
  for (int i = 0; i <= n_; ++i) {
    auto src = (*this)[n_ - i];
    std::copy(src.begin(), src.end(), r.mutable_point(i).begin());
  }
  return r;
}

void Path::write_csv(std::ostream& os) const {
  os << "s";
  for (int c = 0; c < dim_; ++c) os << ",x" << (c + 1);
  os << "\n";
  for (int i = 0; i <= n_; ++i) {
    os << fmt::format("{:.17g}", time(i));
    for (double v : (*this)[i]) os << fmt::format(",{:.17g}", v);
    os << "\n";
  }
}

void PathSampler::brownian(Path& out, PointView x, double t, int n_steps, const StreamId& id) {
  check_grid(t, n_steps);
  const int d = static_cast<int>(x.size());
  if (out.dim_ != d || out.n_ != n_steps) out = Path(d, t, n_steps);
  out.t_ = t;
  out.kind_ = PathKind::free;
  const GaussianStream rng(id);
  const double sd = std::sqrt(t / n_steps);
  double* p = out.pos_.data();
  std::copy(x.begin(), x.end(), p);
  double z[512];
  for (int i = 0; i < n_steps; ++i) {
    rng.normals(static_cast<std::uint32_t>(i), z, d);
    const double* prev = p + std::size_t(i) * d;
    double* next = p + std::size_t(i + 1) * d;
    for (int c = 0; c < d; ++c) next[c] = prev[c] + sd * z[c];
  }
}

void PathSampler::bridge(Path& out, PointView x, PointView y, double t, int n_steps, const StreamId& id) {
  require_dimension(y, static_cast<int>(x.size()), "bridge endpoint");
  brownian(out, x, t, n_steps, id);
  out.kind_ = PathKind::bridge;
  const int d = out.dim_;
  double* p = out.pos_.data();
  const double* wt = p + std::size_t(n_steps) * d;
  double gap[512];
  for (int c = 0; c < d; ++c) gap[c] = wt[c] - y[c];
  for (int i = 1; i < n_steps; ++i) {
    const double frac = static_cast<double>(i) / n_steps;
    double* b = p + std::size_t(i) * d;
    for (int c = 0; c < d; ++c) b[c] -= frac * gap[c];
  }
  std::copy(y.begin(), y.end(), p + std::size_t(n_steps) * d);
}

void PathSampler::bridge_by_drift(Path& out, Path& driver, PointView x, PointView y, double t, int n_steps,
                                  const StreamId& id) {
  require_dimension(y, static_cast<int>(x.size()), "bridge endpoint");
  brownian(driver, x, t, n_steps, id);
  const int d = driver.dim_;
  out = Path(d, t, n_steps);
  out.kind_ = PathKind::bridge;
  const double dt = t / n_steps;
  std::vector<double> integral(d, 0.0);
  std::copy(x.begin(), x.end(), out.mutable_point(0).begin());
  for (int k = 0; k + 1 < n_steps; ++k) {
    const double a = driver.time(k), b = driver.time(k + 1);
    const double big = t - a, small = t - b;
    const double q = dt / small;
    const double flat = 1.0 / small - 1.0 / big;
    const double ramp = q - std::log1p(q);
    auto wk = driver[k];
    auto wk1 = driver[k + 1];
    auto bk1 = out.mutable_point(k + 1);
    for (int c = 0; c < d; ++c) {
      integral[c] += wk[c] * flat + (wk1[c] - wk[c]) / dt * ramp;
      bk1[c] = (b / t) * y[c] + wk1[c] - small * integral[c];
    }
  }
  std::copy(y.begin(), y.end(), out.mutable_point(n_steps).begin());
}

Path sample_brownian(PointView x, double t, int n_steps, const StreamId& id) {
  Path p;
  PathSampler::brownian(p, x, t, n_steps, id);
  return p;
}

Path sample_bridge(PointView x, PointView y, double t, int n_steps, const StreamId& id) {
  Path p;
  PathSampler::bridge(p, x, y, t, n_steps, id);
  return p;
}

ProbabilityEstimate escape_probability(int dim, double r, double t, std::uint64_t n_paths, int n_steps,
                                       std::uint64_t seed, const Execution& exec) {
  if (!(r > 0.0)) throw ParameterError("escape radius must be positive");
  if (dim < 1) throw ParameterError("dimension must be positive");
  if (n_paths < 1) throw ParameterError("n_paths must be positive");
  struct Count {
    std::uint64_t hits = 0;
  };
  const Point origin(dim, 0.0);
  auto parts = run_sharded(n_paths, exec, Count{}, [&](std::uint64_t b, std::uint64_t e, Count& c) {
    Path path;
    for (std::uint64_t k = b; k < e; ++k) {
      PathSampler::brownian(path, origin, t, n_steps, StreamId{seed, 0, k});
      for (int i = 1; i <= n_steps; ++i) {
        if (norm(path[i]) >= r) {
          ++c.hits;
          break;
        }
      }
    }
  });
  std::uint64_t hits = 0;
  for (const auto& c : parts) hits += c.hits;
  const double p = static_cast<double>(hits) / n_paths;
  return {p, std::sqrt(p * (1.0 - p) / n_paths), n_paths};
}

}  // namespace fki
