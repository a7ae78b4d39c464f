#include "fki/potentials.hpp"

#include <algorithm>

namespace fki {

namespace {

double psi(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }
double psi_prime(double s) { return s > 0.0 ? std::exp(-1.0 / s) / (s * s) : 0.0; }

void require_at_least(int d, int lo, const std::string& what) {
  if (d < lo) throw DimensionError(what + " requires dimension >= " + std::to_string(lo));
}

void require_exactly(int d, int want, const std::string& what) {
  if (d != want) throw DimensionError(what + " is defined for dimension " + std::to_string(want) + " only");
}

void require_positive(double v, const std::string& what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(what + " must be positive and finite");
}

double param(const PotentialSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) throw ParameterError("potential '" + spec.kind + "' needs parameter '" + key + "'");
  return it->second;
}

double param_or(const PotentialSpec& spec, const std::string& key, double fallback) {
  auto it = spec.params.find(key);
  return it == spec.params.end() ? fallback : it->second;
}

}  // namespace

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = psi(s), b = psi(1.0 - s);
  return a / (a + b);
}

double smooth_step_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = psi(s), b = psi(1.0 - s);
  const double den = a + b;
  return (psi_prime(s) * b + a * psi_prime(1.0 - s)) / (den * den);
}

double plateau_cutoff(double r) { return smooth_step(3.0 - 4.0 * r); }
double plateau_cutoff_derivative(double r) { return -4.0 * smooth_step_derivative(3.0 - 4.0 * r); }

ScalarField make_v_mu(double mu, int d) {
  require_positive(mu, "v_mu exponent");
  require_at_least(d, 3, "v_mu");
  ScalarField f(
      d,
      [mu](PointView x) {
        const double r = norm(x);
        if (r == 0.0) return kInf;
        if (r >= 0.75) return 0.0;
        const double ell = -std::log(r);
        return plateau_cutoff(r) / (r * r * std::pow(ell, mu));
      },
      "v_mu");
  f.with_singular_points({Point(d, 0.0)}).with_radial_center(Point(d, 0.0));
  return f;
}

VectorField make_a_mu(double mu, int d) {
  require_positive(mu, "a_mu exponent");
  require_at_least(d, 3, "a_mu");
  // A = (x/r) h(r) with h = sqrt(Theta) / (r L^{mu/2}), L = -ln r.
  auto field = [mu](PointView x, std::span<double> out) {
    const double r = norm(x);
    if (r == 0.0) {
      std::fill(out.begin(), out.end(), kInf);
      return;
    }
    double g = 0.0;
    if (r < 0.75) g = std::sqrt(plateau_cutoff(r)) / (r * r * std::pow(-std::log(r), 0.5 * mu));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * g;
  };
  auto div = [mu, d](PointView x) {
    const double r = norm(x);
    if (r == 0.0) return kInf;
    if (r >= 0.75) return 0.0;
    const double ell = -std::log(r);
    const double th = plateau_cutoff(r);
    const double root = std::sqrt(th);
    const double lp = std::pow(ell, -0.5 * mu);
    // h' + (d-1) h / r
    double value = root * lp / (r * r) * ((d - 2) + 0.5 * mu / ell);
    if (root > 0.0) value += plateau_cutoff_derivative(r) / (2.0 * root) * lp / r;
    return value;
  };
  VectorField a(d, field, div, "a_mu");
  a.with_singular_points({Point(d, 0.0)});
  return a;
}

VectorField make_landau(double h, int d) {
  require_exactly(d, 2, "landau");
  if (!std::isfinite(h)) throw ParameterError("landau field strength must be finite");
  return VectorField(
      2,
      [h](PointView x, std::span<double> out) {
        out[0] = 0.0;
        out[1] = h * x[0];
      },
      [](PointView) { return 0.0; }, "landau");
}

ScalarField make_harmonic(double omega, int d) {
  require_at_least(d, 1, "harmonic");
  if (!std::isfinite(omega)) throw ParameterError("oscillator frequency must be finite");
  const double k = 0.5 * omega * omega;
  ScalarField f(d, [k](PointView x) { return k * dot(x, x); }, "harmonic");
  f.with_radial_center(Point(d, 0.0));
  return f;
}

ScalarField make_coulomb(double charge, int d) {
  require_exactly(d, 3, "coulomb");
  if (!std::isfinite(charge)) throw ParameterError("charge must be finite");
  ScalarField f(
      3,
      [charge](PointView x) {
        const double r = norm(x);
        return r == 0.0 ? (charge > 0 ? -kInf : kInf) : -charge / r;
      },
      "coulomb");
  f.with_singular_points({Point(3, 0.0)}).with_radial_center(Point(3, 0.0));
  return f;
}

ScalarField make_constant(double c, int d) {
  if (!std::isfinite(c)) throw ParameterError("constant must be finite");
  return ScalarField::constant(d, c);
}

ScalarField make_indicator_well(double c, double radius, int d) {
  require_positive(radius, "well radius");
  if (!std::isfinite(c)) throw ParameterError("well depth must be finite");
  const double r2 = radius * radius;
  ScalarField f(d, [c, r2](PointView x) { return dot(x, x) < r2 ? c : 0.0; }, "indicator_well");
  f.with_radial_center(Point(d, 0.0));
  return f;
}

ScalarField make_penalty(const Domain& domain, double cutoff) {
  if (!(cutoff >= 0.0)) throw ParameterError("penalty cutoff must be nonnegative");
  const int d = domain.dimension();
  // theta_l = tau(a_l) tau(b_l): equal to 1 on {dist >= 1/l} with |x| <= l and
  // vanishing unless dist > 1/(l+1) and |x| < l+1.
  auto u_inf = [domain, d](PointView x) {
    if (!domain.contains(x)) return kInf;
    const double dist = domain.boundary_distance(x);
    const double r = norm(x);
    double total = std::isfinite(dist) ? std::pow(dist, -3.0) : 0.0;

    Point grad_dist;
    auto gradient_of_dist = [&]() -> const Point& {
      if (grad_dist.empty()) {
        grad_dist.assign(d, 0.0);
        const double h = 1e-4 * std::min(dist, 1.0);
        Point p(x.begin(), x.end());
        for (int i = 0; i < d; ++i) {
          const double xi = p[i];
          p[i] = xi + h;
          const double up = domain.boundary_distance(p);
          p[i] = xi - h;
          const double dn = domain.boundary_distance(p);
          p[i] = xi;
          grad_dist[i] = (up - dn) / (2.0 * h);
        }
      }
      return grad_dist;
    };

    auto add_term = [&](long l) {
      const double lo = 1.0 / (l + 1.0), hi = 1.0 / l;
      const double a = std::isfinite(dist) ? (dist - lo) / (hi - lo) : kInf;
      const double b = (l + 1.0) - r;
      const double ta = smooth_step(a), tb = smooth_step(b);
      const double da = smooth_step_derivative(a), db = smooth_step_derivative(b);
      Point g(d, 0.0);
      if (da != 0.0 && tb != 0.0) {
        const auto& gd = gradient_of_dist();
        for (int i = 0; i < d; ++i) g[i] += da / (hi - lo) * gd[i] * tb;
      }
      if (db != 0.0 && ta != 0.0 && r > 0.0) {
        for (int i = 0; i < d; ++i) g[i] -= ta * db * x[i] / r;
      }
      total += dot(g, g);
    };

    long la = 0, lb = 0;
    if (std::isfinite(dist) && dist < 1.0) la = static_cast<long>(std::floor(1.0 / dist));
    if (r >= 1.0) lb = static_cast<long>(std::floor(r));
    if (la >= 1) add_term(la);
    if (lb >= 1 && lb != la) add_term(lb);
    return total;
  };
  ScalarField f(
      d, [u_inf, cutoff](PointView x) { return std::min(u_inf(x), cutoff); },
      std::isfinite(cutoff) ? "penalty" : "penalty_inf");
  return f;
}

VectorField make_growth_example(int d) {
  require_exactly(d, 2, "growth_example");
  return VectorField(
      2,
      [](PointView x, std::span<double> out) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const double e = std::exp(r2 * r2);
        out[0] = x[1] * e;
        out[1] = -x[0] * e;
      },
      [](PointView) { return 0.0; }, "growth_example");
}

AnyField make_builtin(const PotentialSpec& spec) {
  const int d = spec.dimension;
  const std::string& k = spec.kind;
  if (k == "v_mu") return make_v_mu(param(spec, "mu"), d);
  if (k == "a_mu") return make_a_mu(param(spec, "mu"), d);
  if (k == "landau") return make_landau(param(spec, "h"), d);
  if (k == "harmonic") return make_harmonic(param(spec, "omega"), d);
  if (k == "coulomb") return make_coulomb(param_or(spec, "charge", 1.0), d);
  if (k == "constant") return make_constant(param(spec, "c"), d);
  if (k == "indicator_well") return make_indicator_well(param(spec, "c"), param_or(spec, "radius", 1.0), d);
  if (k == "penalty") {
    if (!spec.domain) throw ParameterError("penalty potential needs a domain");
    if (spec.domain->dimension() != d) throw DimensionError("penalty domain dimension differs");
    return make_penalty(*spec.domain, param_or(spec, "cutoff", kInf));
  }
  if (k == "growth_example") return make_growth_example(d);
  if (k == "zero") return ScalarField::zero(d);
  throw ParameterError("unknown potential kind '" + k + "'");
}

ScalarField make_scalar(const PotentialSpec& spec) {
  if (spec.kind == "zero" || spec.kind.empty()) return ScalarField::zero(spec.dimension);
  auto f = make_builtin(spec);
  if (auto* s = std::get_if<ScalarField>(&f)) return *s;
  throw ParameterError("'" + spec.kind + "' is a vector potential, not a scalar one");
}

VectorField make_vector(const PotentialSpec& spec) {
  if (spec.kind == "zero" || spec.kind.empty()) return VectorField::zero(spec.dimension);
  auto f = make_builtin(spec);
  if (auto* a = std::get_if<VectorField>(&f)) return *a;
  throw ParameterError("'" + spec.kind + "' is a scalar potential, not a vector one");
}

}  // namespace fki
