#include "fki/geometry.hpp"

#include <algorithm>

namespace fki {

namespace {

void require_min_dimension(int d) {
  if (d < 2) throw ParameterError("domains require dimension d >= 2, got " + std::to_string(d));
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

ConeSpec::ConeSpec(double r, double beta) : radius(r), opening_angle(beta) {
  if (!(r > 0.0)) throw ParameterError("cone radius must be positive");
  if (!(beta > 0.0 && beta < kPi / 2)) throw ParameterError("cone opening angle must lie in (0, pi/2)");
}

bool in_cone(const ConeSpec& cone, PointView vertex, PointView direction, PointView y) {
  Point v(y.begin(), y.end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= vertex[i];
  const double len = norm(v);
  if (!(len > 0.0 && len < cone.radius)) return false;
  return dot(direction, v) > len * std::cos(cone.opening_angle);
}

std::string to_string(KillingMode mode) { return mode == KillingMode::naive ? "naive" : "corrected"; }

std::string to_string(RegularityClass kind) {
  switch (kind) {
    case RegularityClass::uniformly_regular:
      return "uniformly_regular";
    case RegularityClass::regular:
      return "regular";
    case RegularityClass::unknown:
      break;
  }
  return "unknown";
}

Domain::Domain(int d, Kind kind) : dim_(d), kind_(std::move(kind)) { require_min_dimension(d); }

Domain Domain::full_space(int d) { return Domain(d, domains::FullSpace{}); }

Domain Domain::half_space(Point normal, double offset) {
  const double len = norm(normal);
  if (!(len > 0.0)) throw ParameterError("half_space normal must be nonzero");
  for (double& c : normal) c /= len;
  const int d = static_cast<int>(normal.size());
  return Domain(d, domains::HalfSpace{std::move(normal), offset / len});
}

Domain Domain::ball(Point center, double radius) {
  if (!(radius > 0.0)) throw ParameterError("ball radius must be positive");
  const int d = static_cast<int>(center.size());
  return Domain(d, domains::Ball{std::move(center), radius});
}

Domain Domain::box(Point lo, Point hi) {
  if (lo.size() != hi.size()) throw DimensionError("box corners differ in dimension");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw ParameterError("box requires lo < hi in every coordinate");
  }
  const int d = static_cast<int>(lo.size());
  return Domain(d, domains::Box{std::move(lo), std::move(hi)});
}

Domain Domain::complement_of_ball(Point center, double radius) {
  if (!(radius > 0.0)) throw ParameterError("complement_of_ball radius must be positive");
  const int d = static_cast<int>(center.size());
  return Domain(d, domains::ComplementOfBall{std::move(center), radius});
}

Domain Domain::custom(int d, std::string name, std::function<bool(PointView)> membership,
                      std::function<double(PointView)> boundary_distance) {
  if (!membership || !boundary_distance) {
    throw ParameterError("custom domains need both a membership predicate and a distance function");
  }
  return Domain(d, domains::Custom{std::move(name), std::move(membership), std::move(boundary_distance)});
}

std::string Domain::name() const {
  return std::visit(Overloaded{[](const domains::FullSpace&) { return std::string("full_space"); },
                               [](const domains::HalfSpace&) { return std::string("half_space"); },
                               [](const domains::Ball&) { return std::string("ball"); },
                               [](const domains::Box&) { return std::string("box"); },
                               [](const domains::ComplementOfBall&) { return std::string("complement_of_ball"); },
                               [](const domains::Custom& c) { return "custom:" + c.name; }},
                    kind_);
}

bool Domain::contains(PointView x) const {
  require_dimension(x, dim_, "Domain::contains");
  return std::visit(Overloaded{[](const domains::FullSpace&) { return true; },
                               [&](const domains::HalfSpace& h) { return dot(h.normal, x) > h.offset; },
                               [&](const domains::Ball& b) { return distance(x, b.center) < b.radius; },
                               [&](const domains::Box& b) {
                                 for (std::size_t i = 0; i < x.size(); ++i) {
                                   if (!(x[i] > b.lo[i] && x[i] < b.hi[i])) return false;
                                 }
                                 return true;
                               },
                               [&](const domains::ComplementOfBall& b) { return distance(x, b.center) > b.radius; },
                               [&](const domains::Custom& c) { return c.membership(x); }},
                    kind_);
}

double Domain::boundary_distance(PointView x) const {
  require_dimension(x, dim_, "Domain::boundary_distance");
  return std::visit(
      Overloaded{[](const domains::FullSpace&) { return kInf; },
                 [&](const domains::HalfSpace& h) { return std::max(0.0, dot(h.normal, x) - h.offset); },
                 [&](const domains::Ball& b) { return std::max(0.0, b.radius - distance(x, b.center)); },
                 [&](const domains::Box& b) {
                   double m = kInf;
                   for (std::size_t i = 0; i < x.size(); ++i) {
                     m = std::min({m, x[i] - b.lo[i], b.hi[i] - x[i]});
                   }
                   return std::max(0.0, m);
                 },
                 [&](const domains::ComplementOfBall& b) { return std::max(0.0, distance(x, b.center) - b.radius); },
                 [&](const domains::Custom& c) { return std::max(0.0, c.distance(x)); }},
      kind_);
}

Regularity Domain::classify_regularity() const {
  const ConeSpec quarter(1.0, kPi / 4);
  return std::visit(
      Overloaded{[](const domains::FullSpace&) {
                   return Regularity{RegularityClass::uniformly_regular, std::nullopt,
                                     "no boundary; regular by convention"};
                 },
                 [&](const domains::HalfSpace&) {
                   return Regularity{RegularityClass::uniformly_regular, quarter, "flat boundary"};
                 },
                 [&](const domains::Ball& b) {
                   return Regularity{RegularityClass::uniformly_regular, ConeSpec(b.radius, kPi / 4),
                                     "outward-normal cone at every boundary point"};
                 },
                 [&](const domains::Box&) {
                   return Regularity{RegularityClass::uniformly_regular, quarter,
                                     "averaged outward normal of the active faces"};
                 },
                 [&](const domains::ComplementOfBall& b) {
                   return Regularity{RegularityClass::uniformly_regular, ConeSpec(b.radius, kPi / 4),
                                     "inward-normal cone into the excluded ball"};
                 },
                 [](const domains::Custom&) {
                   return Regularity{RegularityClass::unknown, std::nullopt,
                                     "custom domain; no exact classification"};
                 }},
      kind_);
}

bool Domain::has_boundary() const { return !std::holds_alternative<domains::FullSpace>(kind_); }

bool Domain::is_custom() const { return std::holds_alternative<domains::Custom>(kind_); }

KillingMode Domain::default_killing() const {
  return is_custom() ? KillingMode::naive : KillingMode::corrected;
}

std::optional<std::pair<Point, Point>> Domain::bounding_box() const {
  if (const auto* b = std::get_if<domains::Box>(&kind_)) return std::make_pair(b->lo, b->hi);
  if (const auto* b = std::get_if<domains::Ball>(&kind_)) {
    Point lo = b->center, hi = b->center;
    for (int i = 0; i < dim_; ++i) {
      lo[i] -= b->radius;
      hi[i] += b->radius;
    }
    return std::make_pair(lo, hi);
  }
  return std::nullopt;
}

Point Domain::exterior_cone_axis(PointView p) const {
  require_dimension(p, dim_, "Domain::exterior_cone_axis");
  Point u(dim_, 0.0);
  std::visit(Overloaded{[](const domains::FullSpace&) { throw ParameterError("full space has no boundary"); },
                        [&](const domains::HalfSpace& h) {
                          for (int i = 0; i < dim_; ++i) u[i] = -h.normal[i];
                        },
                        [&](const domains::Ball& b) {
                          for (int i = 0; i < dim_; ++i) u[i] = p[i] - b.center[i];
                        },
                        [&](const domains::Box& b) {
                          const double tol = 1e-12 * (1.0 + norm(p));
                          for (int i = 0; i < dim_; ++i) {
                            if (std::abs(p[i] - b.lo[i]) <= tol) u[i] -= 1.0;
                            if (std::abs(p[i] - b.hi[i]) <= tol) u[i] += 1.0;
                          }
                        },
                        [&](const domains::ComplementOfBall& b) {
                          for (int i = 0; i < dim_; ++i) u[i] = b.center[i] - p[i];
                        },
                        [](const domains::Custom&) {
                          throw ParameterError("custom domains carry no cone witness");
                        }},
             kind_);
  const double len = norm(u);
  if (!(len > 0.0)) throw ParameterError("point is not on the boundary");
  for (double& c : u) c /= len;
  return u;
}

Domain make_slit_plane() {
  return Domain::custom(
      2, "slit_plane", [](PointView x) { return !(x[1] == 0.0 && x[0] <= 0.0); },
      [](PointView x) { return x[0] <= 0.0 ? std::abs(x[1]) : std::hypot(x[0], x[1]); });
}

Domain make_punctured_space(Point puncture) {
  const int d = static_cast<int>(puncture.size());
  return Domain::custom(
      d, "punctured_space", [puncture](PointView x) { return distance(x, puncture) > 0.0; },
      [puncture](PointView x) { return distance(x, puncture); });
}

}  // namespace fki
