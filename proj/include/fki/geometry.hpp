#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "fki/core.hpp"

namespace fki {

/// Finite cone C_{r,beta}(x,u) = {y : 0 < |y-x| < r, u.(y-x) > |y-x| cos(beta)}.
struct ConeSpec {
  double radius;
  double opening_angle;

  ConeSpec(double r, double beta);
};

bool in_cone(const ConeSpec& cone, PointView vertex, PointView direction, PointView y);

enum class RegularityClass { uniformly_regular, regular, unknown };

struct Regularity {
  RegularityClass kind = RegularityClass::unknown;
  std::optional<ConeSpec> witness;
  std::string note;
};

enum class KillingMode { naive, corrected };

std::string to_string(KillingMode mode);
std::string to_string(RegularityClass kind);

namespace domains {

struct FullSpace {};
/// {x : normal.x > offset}, normal has unit length.
struct HalfSpace {
  Point normal;
  double offset;
};
struct Ball {
  Point center;
  double radius;
};
/// Open box prod_i (lo_i, hi_i).
struct Box {
  Point lo;
  Point hi;
};
struct ComplementOfBall {
  Point center;
  double radius;
};
struct Custom {
  std::string name;
  std::function<bool(PointView)> membership;
  std::function<double(PointView)> distance;
};

}  // namespace domains

/// Open configuration space Lambda in R^d, d >= 2.
class Domain {
 public:
  using Kind = std::variant<domains::FullSpace, domains::HalfSpace, domains::Ball, domains::Box,
                            domains::ComplementOfBall, domains::Custom>;

  static Domain full_space(int d);
  static Domain half_space(Point normal, double offset);
  static Domain ball(Point center, double radius);
  static Domain box(Point lo, Point hi);
  static Domain complement_of_ball(Point center, double radius);
  /// Both callables are required; distance is never inferred from membership.
  static Domain custom(int d, std::string name, std::function<bool(PointView)> membership,
                       std::function<double(PointView)> boundary_distance);

  int dimension() const { return dim_; }
  const Kind& kind() const { return kind_; }
  std::string name() const;

  bool contains(PointView x) const;
  double boundary_distance(PointView x) const;
  Regularity classify_regularity() const;

  bool has_boundary() const;
  bool is_custom() const;
  /// corrected wherever distances describe a smooth or flat boundary, naive for custom sets.
  KillingMode default_killing() const;

  /// Axis-aligned box enclosing Lambda, when Lambda is bounded.
  std::optional<std::pair<Point, Point>> bounding_box() const;

  /// Axis of the exterior witness cone at a boundary point of a built-in domain.
  Point exterior_cone_axis(PointView boundary_point) const;

 private:
  Domain(int d, Kind kind);

  int dim_;
  Kind kind_;
};

/// R^2 minus the closed half-line {(s, 0) : s <= 0}.
Domain make_slit_plane();
/// R^d minus a single point.
Domain make_punctured_space(Point puncture);

}  // namespace fki
