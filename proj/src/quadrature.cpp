#include "fki/quadrature.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <map>
#include <mutex>

namespace fki::quad {

namespace {

template <int N>
Rule1D mirror_boost_rule() {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& a = G::abscissa();
  const auto& w = G::weights();
  Rule1D r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) {
      r.nodes.push_back(0.0);
      r.weights.push_back(w[i]);
    } else {
      r.nodes.push_back(-a[i]);
      r.weights.push_back(w[i]);
      r.nodes.push_back(a[i]);
      r.weights.push_back(w[i]);
    }
  }
  return r;
}

Rule1D make_rule(int order) {
  switch (order) {
    case 4:
      return mirror_boost_rule<4>();
    case 6:
      return mirror_boost_rule<6>();
    case 8:
      return mirror_boost_rule<8>();
    case 10:
      return mirror_boost_rule<10>();
    case 16:
      return mirror_boost_rule<16>();
    case 20:
      return mirror_boost_rule<20>();
    case 30:
      return mirror_boost_rule<30>();
    default:
      throw ParameterError("unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

// Orthonormal frame whose last (d=3) or first (d=2) vector is `axis`.
std::array<Point, 3> frame_for(int d, PointView axis) {
  Point e(axis.begin(), axis.end());
  const double len = norm(e);
  for (double& c : e) c /= len;
  if (d == 2) return {e, Point{-e[1], e[0]}, Point{}};
  Point helper = std::abs(e[0]) < 0.9 ? Point{1, 0, 0} : Point{0, 1, 0};
  Point u{e[1] * helper[2] - e[2] * helper[1], e[2] * helper[0] - e[0] * helper[2],
          e[0] * helper[1] - e[1] * helper[0]};
  const double lu = norm(u);
  for (double& c : u) c /= lu;
  Point v{e[1] * u[2] - e[2] * u[1], e[2] * u[0] - e[0] * u[2], e[0] * u[1] - e[1] * u[0]};
  return {u, v, e};
}

}  // namespace

const Rule1D& gauss_legendre(int order) {
  static std::mutex mu;
  static std::map<int, Rule1D> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

Rule1D composite(const std::vector<double>& breaks, int order) {
  const Rule1D& g = gauss_legendre(order);
  Rule1D out;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k], b = breaks[k + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      out.nodes.push_back(mid + half * g.nodes[i]);
      out.weights.push_back(half * g.weights[i]);
    }
  }
  return out;
}

double integrate(const Rule1D& rule, const std::function<double(double)>& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(rule.nodes[i]);
  return s;
}

SphereRule sphere_uniform(int d, int order) {
  SphereRule s;
  s.dim = d;
  if (d == 2) {
    const int n = 2 * order;
    for (int k = 0; k < n; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / n;
      s.directions.push_back(std::cos(phi));
      s.directions.push_back(std::sin(phi));
      s.weights.push_back(2.0 * kPi / n);
    }
    return s;
  }
  if (d != 3) throw ParameterError("sphere rules are implemented for d = 2 and d = 3");
  const Rule1D& g = gauss_legendre(order);
  const int nphi = 2 * order;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double c = g.nodes[i];
    const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int k = 0; k < nphi; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / nphi;
      s.directions.push_back(sn * std::cos(phi));
      s.directions.push_back(sn * std::sin(phi));
      s.directions.push_back(c);
      s.weights.push_back(g.weights[i] * 2.0 * kPi / nphi);
    }
  }
  return s;
}

SphereRule sphere_graded(int d, int order, PointView axis, int levels) {
  if (d != 2 && d != 3) throw ParameterError("sphere rules are implemented for d = 2 and d = 3");
  const auto frame = frame_for(d, axis);
  // Angles measured from the axis, panels [pi 2^{-j-1}, pi 2^{-j}] plus a tiny cap.
  std::vector<double> breaks{0.0};
  for (int j = levels; j >= 0; --j) breaks.push_back(kPi * std::ldexp(1.0, -j));
  const Rule1D angles = composite(breaks, order);
  SphereRule s;
  s.dim = d;
  if (d == 2) {
    for (std::size_t i = 0; i < angles.nodes.size(); ++i) {
      for (int sign : {-1, 1}) {
        const double a = sign * angles.nodes[i];
        for (int c = 0; c < 2; ++c) s.directions.push_back(std::cos(a) * frame[0][c] + std::sin(a) * frame[1][c]);
        s.weights.push_back(angles.weights[i]);
      }
    }
    return s;
  }
  const int nphi = 2 * order;
  for (std::size_t i = 0; i < angles.nodes.size(); ++i) {
    const double th = angles.nodes[i];
    const double w = angles.weights[i] * std::sin(th) * 2.0 * kPi / nphi;
    for (int k = 0; k < nphi; ++k) {
      const double phi = 2.0 * kPi * (k + 0.5) / nphi;
      const double a = std::sin(th) * std::cos(phi), b = std::sin(th) * std::sin(phi), c = std::cos(th);
      for (int m = 0; m < 3; ++m) s.directions.push_back(a * frame[0][m] + b * frame[1][m] + c * frame[2][m]);
      s.weights.push_back(w);
    }
  }
  return s;
}

}  // namespace fki::quad
