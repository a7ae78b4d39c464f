#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fki {

using Point = std::vector<double>;
using PointView = std::span<const double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Arguments whose dimensions do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters outside the admissible range of an operation.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A field returned a non-finite value where no cap was configured.
class FieldEvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical quadrature failed to stabilise within its refinement budget.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation preconditions that depend on run-time data (e.g. x outside the domain).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double dot(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(PointView a) { return std::sqrt(dot(a, a)); }

inline double distance(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline void require_dimension(PointView x, int d, const char* what) {
  if (static_cast<int>(x.size()) != d) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(d) +
                         ", got " + std::to_string(x.size()));
  }
}

/// Surface area of the unit sphere S^{d-1} in R^d.
inline double unit_sphere_area(int d) {
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

}  // namespace fki
