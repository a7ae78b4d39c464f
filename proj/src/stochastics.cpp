#include "fki/stochastics.hpp"

#include <string>

namespace fki {

namespace {

void check_dims(int field_dim, const Path& path, const char* what) {
  if (field_dim != path.dimension()) {
    throw DimensionError(std::string(what) + ": field and path dimensions differ");
  }
}

}  // namespace

double capped(double raw, const std::optional<double>& cap, std::uint64_t& hits, const char* what) {
  if (cap) {
    if (std::isnan(raw)) {
      ++hits;
      return *cap;
    }
    if (raw > *cap) {
      ++hits;
      return *cap;
    }
    if (raw < -*cap) {
      ++hits;
      return -*cap;
    }
    return raw;
  }
  if (!std::isfinite(raw)) {
    throw FieldEvaluationError(std::string(what) + " is not finite on a grid point and no cap is set");
  }
  return raw;
}

double ito_integral(const VectorField& a, const Path& path, std::uint64_t* cap_hits) {
  check_dims(a.dimension(), path, "ito_integral");
  if (a.is_zero()) return 0.0;
  const int d = path.dimension();
  std::uint64_t hits = 0;
  Point buf(d);
  double sum = 0.0;
  for (int i = 0; i < path.n_steps(); ++i) {
    auto p = path[i];
    auto q = path[i + 1];
    a(p, buf);
    for (int c = 0; c < d; ++c) sum += capped(buf[c], a.cap(), hits, "vector potential") * (q[c] - p[c]);
  }
  if (cap_hits) *cap_hits += hits;
  return sum;
}

double time_integral(const ScalarField& f, const Path& path, std::uint64_t* cap_hits) {
  check_dims(f.dimension(), path, "time_integral");
  if (f.is_zero()) return 0.0;
  std::uint64_t hits = 0;
  double sum = 0.0;
  for (int i = 0; i < path.n_steps(); ++i) sum += capped(f(path[i]), f.cap(), hits, "scalar potential");
  if (cap_hits) *cap_hits += hits;
  return sum * path.dt();
}

ActionValue action(const VectorField& a, const ScalarField& v, const Path& path) {
  check_dims(a.dimension(), path, "action");
  check_dims(v.dimension(), path, "action");
  ActionValue out;
  out.ito_term = ito_integral(a, path, &out.cap_hits);
  if (!a.is_zero()) {
    std::uint64_t hits = 0;
    double sum = 0.0;
    for (int i = 0; i < path.n_steps(); ++i) sum += capped(a.divergence(path[i]), a.cap(), hits, "div A");
    out.div_term = 0.5 * sum * path.dt();
    out.cap_hits += hits;
  }
  out.v_term = time_integral(v, path, &out.cap_hits);
  return out;
}

double bridge_ito_integral_drift_form(const VectorField& a, const Path& bridge, const Path& driver) {
  check_dims(a.dimension(), bridge, "bridge_ito_integral_drift_form");
  if (driver.n_steps() != bridge.n_steps() || driver.dimension() != bridge.dimension()) {
    throw DimensionError("bridge and driver grids differ");
  }
  const int d = bridge.dimension();
  const double t = bridge.total_time(), dt = bridge.dt();
  auto y = bridge[bridge.n_steps()];
  std::uint64_t hits = 0;
  Point buf(d);
  double sum = 0.0;
  for (int i = 0; i < bridge.n_steps(); ++i) {
    auto b = bridge[i];
    a(b, buf);
    const double remaining = t - bridge.time(i);
    for (int c = 0; c < d; ++c) {
      const double ac = capped(buf[c], a.cap(), hits, "vector potential");
      sum += ac * (driver[i + 1][c] - driver[i][c]) + ac * (y[c] - b[c]) / remaining * dt;
    }
  }
  return sum;
}

SurvivalWeight survival(const Domain& domain, const Path& path, KillingMode mode) {
  if (domain.dimension() != path.dimension()) throw DimensionError("survival: domain and path dimensions differ");
  SurvivalWeight w{1.0, mode};
  if (!domain.has_boundary()) return w;
  const int n = path.n_steps();
  for (int i = 1; i <= n; ++i) {
    if (!domain.contains(path[i])) {
      w.value = 0.0;
      return w;
    }
  }
  if (mode == KillingMode::naive) return w;
  const double dt = path.dt();
  double prev = domain.boundary_distance(path[0]);
  double factor = 1.0;
  for (int i = 1; i <= n; ++i) {
    const double next = domain.boundary_distance(path[i]);
    factor *= -std::expm1(-2.0 * prev * next / dt);
    prev = next;
  }
  w.value = factor;
  return w;
}

}  // namespace fki
