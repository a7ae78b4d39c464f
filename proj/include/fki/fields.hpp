#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "fki/core.hpp"

namespace fki {

/// Evaluatable scalar potential V : R^d -> R.
///
/// Evaluation through operator() is raw. The optional cap V_max is applied by
/// path integrals (see stochastics), not here.
class ScalarField {
 public:
  using Fn = std::function<double(PointView)>;

  ScalarField(int dim, Fn fn, std::string name = "scalar");

  double operator()(PointView x) const { return (*fn_)(x); }

  int dimension() const { return dim_; }
  const std::string& name() const { return name_; }

  const std::vector<Point>& singular_points() const { return singular_; }
  ScalarField& with_singular_points(std::vector<Point> pts);

  std::optional<double> cap() const { return cap_; }
  ScalarField& with_cap(std::optional<double> v_max);

  /// Center of rotational symmetry, if the field is radial.
  const std::optional<Point>& radial_center() const { return radial_center_; }
  ScalarField& with_radial_center(Point c);

  /// Known to vanish identically; lets integrators skip work.
  bool is_zero() const { return zero_; }

  static ScalarField zero(int dim);
  static ScalarField constant(int dim, double c);

 private:
  int dim_;
  std::shared_ptr<const Fn> fn_;
  std::string name_;
  std::vector<Point> singular_;
  std::optional<double> cap_;
  std::optional<Point> radial_center_;
  bool zero_ = false;
};

/// Evaluatable vector potential A : R^d -> R^d with divergence.
class VectorField {
 public:
  using Fn = std::function<void(PointView, std::span<double>)>;
  using DivFn = std::function<double(PointView)>;

  /// div may be empty; divergence() then falls back to central differences.
  VectorField(int dim, Fn fn, DivFn div = {}, std::string name = "vector");

  void operator()(PointView x, std::span<double> out) const { (*fn_)(x, out); }
  Point operator()(PointView x) const;

  double divergence(PointView x) const;
  /// Central-difference divergence with step h_div = 1e-4 (1 + |x|).
  double fd_divergence(PointView x) const;
  bool has_analytic_divergence() const { return static_cast<bool>(div_); }

  int dimension() const { return dim_; }
  const std::string& name() const { return name_; }

  const std::vector<Point>& singular_points() const { return singular_; }
  VectorField& with_singular_points(std::vector<Point> pts);

  /// Componentwise clamp applied to |A_i| and |div A| inside path integrals.
  std::optional<double> cap() const { return cap_; }
  VectorField& with_cap(std::optional<double> v_max);

  bool is_zero() const { return zero_; }

  static VectorField zero(int dim);

 private:
  int dim_;
  std::shared_ptr<const Fn> fn_;
  DivFn div_;
  std::string name_;
  std::vector<Point> singular_;
  std::optional<double> cap_;
  bool zero_ = false;
};

// Pointwise combinators. Metadata (singular points, radial center) is merged
// conservatively; caps are dropped.
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField scale(const ScalarField& f, double c);
ScalarField abs(const ScalarField& f);
ScalarField positive_part(const ScalarField& f);
ScalarField negative_part(const ScalarField& f);
/// f * chi_{B_radius(center)}
ScalarField restrict_to_ball(const ScalarField& f, Point center, double radius);
/// |A|^2
ScalarField squared_norm(const VectorField& a);
/// div A as a scalar field.
ScalarField divergence_field(const VectorField& a);
VectorField scale(const VectorField& a, double c);

}  // namespace fki
