#include "fki/fields.hpp"

#include <algorithm>

namespace fki {

namespace {

std::vector<Point> merged(const std::vector<Point>& a, const std::vector<Point>& b) {
  std::vector<Point> out = a;
  for (const auto& p : b) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

std::optional<Point> common_center(const std::optional<Point>& a, const std::optional<Point>& b) {
  if (a && b && *a == *b) return a;
  return std::nullopt;
}

void check_same_dimension(int a, int b) {
  if (a != b) throw DimensionError("fields have different dimensions");
}

}  // namespace

ScalarField::ScalarField(int dim, Fn fn, std::string name)
    : dim_(dim), fn_(std::make_shared<const Fn>(std::move(fn))), name_(std::move(name)) {
  if (dim < 1) throw ParameterError("field dimension must be positive");
}

ScalarField& ScalarField::with_singular_points(std::vector<Point> pts) {
  for (const auto& p : pts) require_dimension(p, dim_, "singular point");
  singular_ = std::move(pts);
  return *this;
}

ScalarField& ScalarField::with_cap(std::optional<double> v_max) {
  if (v_max && !(*v_max > 0.0)) throw ParameterError("cap must be positive");
  cap_ = v_max;
  return *this;
}

ScalarField& ScalarField::with_radial_center(Point c) {
  require_dimension(c, dim_, "radial center");
  radial_center_ = std::move(c);
  return *this;
}

ScalarField ScalarField::zero(int dim) {
  ScalarField f(dim, [](PointView) { return 0.0; }, "zero");
  f.zero_ = true;
  f.radial_center_ = Point(dim, 0.0);
  return f;
}

ScalarField ScalarField::constant(int dim, double c) {
  if (c == 0.0) return zero(dim);
  ScalarField f(dim, [c](PointView) { return c; }, "constant");
  f.radial_center_ = Point(dim, 0.0);
  return f;
}

VectorField::VectorField(int dim, Fn fn, DivFn div, std::string name)
    : dim_(dim), fn_(std::make_shared<const Fn>(std::move(fn))), div_(std::move(div)), name_(std::move(name)) {
  if (dim < 1) throw ParameterError("field dimension must be positive");
}

Point VectorField::operator()(PointView x) const {
  Point out(dim_);
  (*fn_)(x, out);
  return out;
}

double VectorField::divergence(PointView x) const { return div_ ? div_(x) : fd_divergence(x); }

double VectorField::fd_divergence(PointView x) const {
  const double h = 1e-4 * (1.0 + norm(x));
  Point xp(x.begin(), x.end());
  Point ap(dim_), am(dim_);
  double div = 0.0;
  for (int i = 0; i < dim_; ++i) {
    const double xi = xp[i];
    xp[i] = xi + h;
    (*fn_)(xp, ap);
    xp[i] = xi - h;
    (*fn_)(xp, am);
    xp[i] = xi;
    div += (ap[i] - am[i]) / (2.0 * h);
  }
  return div;
}

VectorField& VectorField::with_singular_points(std::vector<Point> pts) {
  for (const auto& p : pts) require_dimension(p, dim_, "singular point");
  singular_ = std::move(pts);
  return *this;
}

VectorField& VectorField::with_cap(std::optional<double> v_max) {
  if (v_max && !(*v_max > 0.0)) throw ParameterError("cap must be positive");
  cap_ = v_max;
  return *this;
}

VectorField VectorField::zero(int dim) {
  VectorField a(
      dim, [](PointView, std::span<double> out) { std::fill(out.begin(), out.end(), 0.0); },
      [](PointView) { return 0.0; }, "zero");
  a.zero_ = true;
  return a;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_same_dimension(a.dimension(), b.dimension());
  ScalarField f(a.dimension(), [a, b](PointView x) { return a(x) - b(x); }, a.name() + "-" + b.name());
  f.with_singular_points(merged(a.singular_points(), b.singular_points()));
  if (auto c = common_center(a.radial_center(), b.radial_center())) f.with_radial_center(*c);
  return f;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_same_dimension(a.dimension(), b.dimension());
  ScalarField f(a.dimension(), [a, b](PointView x) { return a(x) + b(x); }, a.name() + "+" + b.name());
  f.with_singular_points(merged(a.singular_points(), b.singular_points()));
  if (auto c = common_center(a.radial_center(), b.radial_center())) f.with_radial_center(*c);
  return f;
}

namespace {

ScalarField pointwise(const ScalarField& src, std::function<double(double)> op, const std::string& tag) {
  ScalarField f(src.dimension(), [src, op](PointView x) { return op(src(x)); }, tag + "(" + src.name() + ")");
  f.with_singular_points(src.singular_points());
  if (src.radial_center()) f.with_radial_center(*src.radial_center());
  return f;
}

}  // namespace

ScalarField scale(const ScalarField& f, double c) {
  return pointwise(f, [c](double v) { return c * v; }, "scale");
}

ScalarField abs(const ScalarField& f) {
  return pointwise(f, [](double v) { return std::abs(v); }, "abs");
}

ScalarField positive_part(const ScalarField& f) {
  return pointwise(f, [](double v) { return v > 0.0 ? v : 0.0; }, "pos");
}

ScalarField negative_part(const ScalarField& f) {
  return pointwise(f, [](double v) { return v < 0.0 ? -v : 0.0; }, "neg");
}

ScalarField restrict_to_ball(const ScalarField& src, Point center, double radius) {
  require_dimension(center, src.dimension(), "restrict_to_ball");
  ScalarField f(
      src.dimension(),
      [src, center, radius](PointView x) { return distance(x, center) < radius ? src(x) : 0.0; },
      "restrict(" + src.name() + ")");
  std::vector<Point> inside;
  for (const auto& p : src.singular_points()) {
    if (distance(p, center) <= radius) inside.push_back(p);
  }
  f.with_singular_points(std::move(inside));
  if (auto c = common_center(src.radial_center(), center)) f.with_radial_center(*c);
  return f;
}

ScalarField squared_norm(const VectorField& a) {
  const int d = a.dimension();
  ScalarField f(
      d,
      [a, d](PointView x) {
        double buf[16];
        Point heap;
        std::span<double> out(buf, static_cast<std::size_t>(d));
        if (d > 16) {
          heap.resize(d);
          out = heap;
        }
        a(x, out);
        double s = 0.0;
        for (double v : out) s += v * v;
        return s;
      },
      "sq(" + a.name() + ")");
  f.with_singular_points(a.singular_points());
  return f;
}

ScalarField divergence_field(const VectorField& a) {
  ScalarField f(a.dimension(), [a](PointView x) { return a.divergence(x); }, "div(" + a.name() + ")");
  f.with_singular_points(a.singular_points());
  return f;
}

VectorField scale(const VectorField& a, double c) {
  VectorField out(
      a.dimension(),
      [a, c](PointView x, std::span<double> o) {
        a(x, o);
        for (double& v : o) v *= c;
      },
      [a, c](PointView x) { return c * a.divergence(x); }, "scale(" + a.name() + ")");
  out.with_singular_points(a.singular_points());
  return out;
}

}  // namespace fki
