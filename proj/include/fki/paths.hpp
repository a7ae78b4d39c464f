#pragma once

#include <cstdint>
#include <iosfwd>

#include "fki/core.hpp"
#include "fki/parallel.hpp"
#include "fki/rng.hpp"

namespace fki {

enum class PathKind { free, bridge };

/// Discretised Brownian motion (diffusion constant 1/2) or Brownian bridge on
/// the uniform grid s_i = i t / n_steps.
class Path {
 public:
  Path() = default;
  Path(int dim, double t, int n_steps);

  int dimension() const { return dim_; }
  double total_time() const { return t_; }
  int n_steps() const { return n_; }
  double dt() const { return t_ / n_; }
  double time(int i) const { return t_ * i / n_; }
  PathKind kind() const { return kind_; }

  PointView operator[](int i) const { return {pos_.data() + std::size_t(i) * dim_, std::size_t(dim_)}; }
  std::span<double> mutable_point(int i) { return {pos_.data() + std::size_t(i) * dim_, std::size_t(dim_)}; }
  const std::vector<double>& positions() const { return pos_; }

  /// Path on [0, s_mid] and on [s_mid, t] for a grid index mid.
  std::pair<Path, Path> split(int mid) const;
  /// Same positions traversed backwards.
  Path reversed() const;

  /// Debug dump: one row per grid point, columns s, x_1..x_d.
  void write_csv(std::ostream& os) const;

 private:
  friend class PathSampler;
  int dim_ = 0;
  double t_ = 0.0;
  int n_ = 0;
  PathKind kind_ = PathKind::free;
  std::vector<double> pos_;
};

/// Reusable sampler; fills a Path buffer in place from a GaussianStream.
class PathSampler {
 public:
  /// Free path from x: increments are N(0, dt) per coordinate.
  static void brownian(Path& out, PointView x, double t, int n_steps, const StreamId& id);
  /// Bridge pinned at x (s=0) and y (s=t) via b(s_i) = w(s_i) - (s_i/t)(w(t) - y),
  /// which has exactly the bridge law at the grid points.
  static void bridge(Path& out, PointView x, PointView y, double t, int n_steps, const StreamId& id);
  /// Drift construction b(s) = (s/t) y + w(s) - (t-s) int_0^s w(u)/(t-u)^2 du with
  /// the integral taken exactly over the piecewise-linear interpolant of w.
  /// Also returns the driving free path in `driver`.
  static void bridge_by_drift(Path& out, Path& driver, PointView x, PointView y, double t, int n_steps,
                              const StreamId& id);
};

Path sample_brownian(PointView x, double t, int n_steps, const StreamId& id);
Path sample_bridge(PointView x, PointView y, double t, int n_steps, const StreamId& id);

struct ProbabilityEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_paths = 0;
};

/// Fraction of paths from the origin whose grid maximum of |w(s_i)| reaches r.
/// A lower bound for P_0{sup_{0<s<=t} |w(s)| >= r}.
ProbabilityEstimate escape_probability(int dim, double r, double t, std::uint64_t n_paths, int n_steps,
                                       std::uint64_t seed, const Execution& exec = {});

}  // namespace fki
