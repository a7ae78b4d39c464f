#include <algorithm>
// pchip in this Boost release calls isnan unqualified.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "fki/potentials.hpp"
#include "fki/quadrature.hpp"

namespace fki {

namespace {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

double raw_bump(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

// Fraction of the sphere |z - y| = s, |y| = rho, lying inside B_R.
double cap_fraction(int d, double rho, double s, double big_r) {
  if (rho == 0.0) return s < big_r ? 1.0 : 0.0;
  const double c = std::clamp((big_r * big_r - rho * rho - s * s) / (2.0 * rho * s), -1.0, 1.0);
  return d == 3 ? 0.5 * (1.0 + c) : 1.0 - std::acos(c) / kPi;
}

std::vector<double> split(double a, double b, int pieces) {
  std::vector<double> br;
  for (int k = 0; k <= pieces; ++k) br.push_back(a + (b - a) * k / pieces);
  return br;
}

}  // namespace

struct Mollifier::Table {
  Pchip theta;
};

Mollifier::Mollifier(int d, double r, double big_r) : d_(d), r_(r), big_r_(big_r) {
  if (d != 2 && d != 3) throw DimensionError("mollification is implemented for d = 2 and d = 3");
  if (!(r > 0.0 && r <= 1.0)) throw ParameterError("mollifier radius r must lie in (0, 1]");
  if (!(big_r > 1.0) || !std::isfinite(big_r)) throw ParameterError("cutoff radius R must exceed 1");
  const quad::Rule1D unit = quad::composite(split(0.0, 1.0, 8), 20);
  double mass = 0.0;
  for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
    mass += unit.weights[i] * raw_bump(unit.nodes[i]) * std::pow(unit.nodes[i], d - 1);
  }
  normalisation_ = 1.0 / (unit_sphere_area(d) * mass);

  const int n = 801;
  std::vector<double> xs(n), ys(n);
  for (int k = 0; k < n; ++k) {
    const double rho = big_r - 1.0 + 2.0 * k / (n - 1);
    xs[k] = rho;
    std::vector<double> br = split(0.0, 1.0, 4);
    const double kink = std::abs(big_r - rho);
    if (kink > 0.0 && kink < 1.0) br.push_back(kink);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    const quad::Rule1D rule = quad::composite(br, 20);
    double v = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = rule.nodes[i];
      v += rule.weights[i] * raw_bump(s) * std::pow(s, d - 1) * cap_fraction(d, rho, s, big_r);
    }
    ys[k] = std::clamp(v * normalisation_ * unit_sphere_area(d), 0.0, 1.0);
  }
  ys.front() = 1.0;
  ys.back() = 0.0;
  table_ = std::make_shared<const Table>(Table{Pchip(std::move(xs), std::move(ys))});
}

double Mollifier::bump_radial(double rho) const { return normalisation_ * raw_bump(rho); }

double Mollifier::bump(PointView x) const {
  require_dimension(x, d_, "mollifier");
  return bump_radial(norm(x) / r_) / std::pow(r_, d_);
}

double Mollifier::cutoff(double rho) const {
  if (rho <= big_r_ - 1.0) return 1.0;
  if (rho >= big_r_ + 1.0) return 0.0;
  return std::clamp(table_->theta(rho), 0.0, 1.0);
}

double Mollifier::cutoff_derivative(double rho) const {
  if (rho <= big_r_ - 1.0 || rho >= big_r_ + 1.0) return 0.0;
  return table_->theta.prime(rho);
}

namespace {

// integrand(z, theta(|z|), theta'(|z|), out) accumulates nvals components.
using Integrand = std::function<void(PointView, double, double, double*)>;

class Convolver {
 public:
  Convolver(const Mollifier& m, const MollifyOptions& opt)
      : m_(m), d_(m.dimension()), sphere_(quad::sphere_uniform(m.dimension(), opt.angular_order)) {
    const quad::Rule1D base = quad::composite(split(0.0, m.r(), 4), opt.radial_order);
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      const double rho = base.nodes[i];
      radial_nodes_.push_back(rho);
      radial_weights_.push_back(base.weights[i] * std::pow(rho, d_ - 1) * m.bump_radial(rho / m.r()) /
                                std::pow(m.r(), d_));
    }
    // discrete unit mass, so constants are reproduced to rounding
    double mass = 0.0;
    for (double w : radial_weights_) mass += w;
    double area = 0.0;
    for (double w : sphere_.weights) area += w;
    for (double& w : radial_weights_) w /= mass * area;
    std::vector<double> br{0.0};
    for (int k = 24; k >= 0; --k) br.push_back(std::ldexp(1.0, -k));
    unit_geometric_ = quad::composite(br, opt.radial_order);
  }

  void operator()(PointView y, const std::vector<Point>& singular, int nvals, const Integrand& g,
                  double* result) const {
    std::fill(result, result + nvals, 0.0);
    if (norm(y) >= m_.big_r() + 1.0 + m_.r()) return;
    const Point* sing = nullptr;
    double best = m_.r();
    for (const auto& s : singular) {
      const double a = distance(s, y);
      if (a < best) {
        best = a;
        sing = &s;
      }
    }
    Point z(d_);
    std::vector<double> tmp(nvals);
    auto eval = [&](double weight) {
      const double rz = norm(z);
      const double th = m_.cutoff(rz);
      const double dth = m_.cutoff_derivative(rz);
      if (th == 0.0 && dth == 0.0) return;
      std::fill(tmp.begin(), tmp.end(), 0.0);
      g(z, th, dth, tmp.data());
      for (int c = 0; c < nvals; ++c) result[c] += weight * tmp[c];
    };
    if (!sing) {
      for (std::size_t i = 0; i < sphere_.size(); ++i) {
        auto w = sphere_.direction(i);
        for (std::size_t k = 0; k < radial_nodes_.size(); ++k) {
          for (int c = 0; c < d_; ++c) z[c] = y[c] + radial_nodes_[k] * w[c];
          eval(sphere_.weights[i] * radial_weights_[k]);
        }
      }
      return;
    }
    // Polar around the singular point, each ray clipped to the ball B_r(y).
    const Point& s = *sing;
    Point sy(d_);
    for (int c = 0; c < d_; ++c) sy[c] = s[c] - y[c];
    const double sy2 = dot(sy, sy);
    const double r2 = m_.r() * m_.r();
    for (std::size_t i = 0; i < sphere_.size(); ++i) {
      auto w = sphere_.direction(i);
      const double b = dot(w, sy);
      const double reach = -b + std::sqrt(std::max(0.0, b * b - (sy2 - r2)));
      if (!(reach > 0.0)) continue;
      for (std::size_t k = 0; k < unit_geometric_.nodes.size(); ++k) {
        const double rho = reach * unit_geometric_.nodes[k];
        double dz2 = 0.0;
        for (int c = 0; c < d_; ++c) {
          z[c] = s[c] + rho * w[c];
          dz2 += (z[c] - y[c]) * (z[c] - y[c]);
        }
        const double kern = m_.bump_radial(std::sqrt(dz2) / m_.r()) / std::pow(m_.r(), d_);
        if (kern == 0.0) continue;
        eval(sphere_.weights[i] * reach * unit_geometric_.weights[k] * std::pow(rho, d_ - 1) * kern);
      }
    }
  }

 private:
  Mollifier m_;
  int d_;
  quad::SphereRule sphere_;
  std::vector<double> radial_nodes_, radial_weights_;
  quad::Rule1D unit_geometric_;
};

}  // namespace

ScalarField mollify(const ScalarField& f, double r, double big_r, const MollifyOptions& opt) {
  const int d = f.dimension();
  auto conv = std::make_shared<const Convolver>(Mollifier(d, r, big_r), opt);
  const auto singular = f.singular_points();
  auto direct = [conv, f, singular](PointView y) {
    double v = 0.0;
    (*conv)(y, singular, 1, [&f](PointView z, double th, double, double* out) { out[0] = th * f(z); }, &v);
    return v;
  };
  const std::string name = "mollified(" + f.name() + ")";
  const Point origin(d, 0.0);
  const double support = big_r + 1.0 + r;
  if (opt.tabulate_radial && f.radial_center() && *f.radial_center() == origin) {
    // delta_r and Theta_R are radial, so the result is radial too.
    std::vector<double> xs, ys;
    const int inner = 120;
    for (int k = 0; k <= inner; ++k) xs.push_back(3.0 * r * k / inner);
    const double step = std::min(0.02, 0.25 * r);
    const int outer = static_cast<int>(std::ceil((support - 3.0 * r) / step));
    for (int k = 1; k <= outer; ++k) xs.push_back(3.0 * r + (support - 3.0 * r) * k / outer);
    Point y(d, 0.0);
    for (double rho : xs) {
      y[0] = rho;
      ys.push_back(direct(y));
    }
    auto table = std::make_shared<const Pchip>(std::move(xs), std::move(ys));
    ScalarField out(
        d,
        [table, support](PointView x) {
          const double rho = norm(x);
          return rho >= support ? 0.0 : (*table)(rho);
        },
        name);
    out.with_radial_center(origin);
    return out;
  }
  return ScalarField(d, direct, name);
}

VectorField mollify(const VectorField& a, double r, double big_r, const MollifyOptions& opt) {
  const int d = a.dimension();
  auto conv = std::make_shared<const Convolver>(Mollifier(d, r, big_r), opt);
  const auto singular = a.singular_points();
  auto field = [conv, a, singular, d](PointView y, std::span<double> out) {
    (*conv)(
        y, singular, d,
        [&a](PointView z, double th, double, double* o) {
          Point v = a(z);
          for (std::size_t c = 0; c < v.size(); ++c) o[c] = th * v[c];
        },
        out.data());
  };
  // div(delta_r * Theta_R A) = delta_r * (grad Theta_R . A + Theta_R div A)
  auto div = [conv, a, singular](PointView y) {
    double v = 0.0;
    (*conv)(
        y, singular, 1,
        [&a](PointView z, double th, double dth, double* o) {
          double s = 0.0;
          if (dth != 0.0) {
            const Point v = a(z);
            const double rz = norm(z);
            for (std::size_t c = 0; c < v.size(); ++c) s += dth * z[c] / rz * v[c];
          }
          if (th != 0.0) s += th * a.divergence(z);
          o[0] = s;
        },
        &v);
    return v;
  };
  return VectorField(d, field, div, "mollified(" + a.name() + ")");
}

}  // namespace fki
