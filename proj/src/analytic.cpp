#include "fki/analytic.hpp"

namespace fki::analytic {

double free_kernel(double t, PointView x, PointView y) {
  const double d = static_cast<double>(x.size());
  const double r = distance(x, y);
  return std::pow(2.0 * kPi * t, -0.5 * d) * std::exp(-r * r / (2.0 * t));
}

double half_space_kernel(double t, PointView x, PointView y, PointView normal, double offset) {
  const double ny = dot(normal, y) - offset;
  Point mirrored(y.begin(), y.end());
  for (std::size_t i = 0; i < mirrored.size(); ++i) mirrored[i] -= 2.0 * ny * normal[i];
  return free_kernel(t, x, y) - free_kernel(t, x, mirrored);
}

std::complex<double> landau_kernel(double h, double t, PointView x, PointView y) {
  if (x.size() != 2 || y.size() != 2) throw DimensionError("landau_kernel is defined on R^2");
  if (h < 0.0) throw ParameterError("landau_kernel expects h >= 0");
  if (h == 0.0) return free_kernel(t, x, y);
  const double half = 0.5 * h * t;
  const double r2 = (x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1]);
  const double modulus = h / (4.0 * kPi * std::sinh(half)) * std::exp(-0.25 * h * r2 / std::tanh(half));
  const double phase = -0.5 * h * (x[0] * y[1] - x[1] * y[0]) - 0.5 * h * (y[0] * y[1] - x[0] * x[1]);
  return std::polar(modulus, phase);
}

double mehler_kernel(double omega, double t, PointView x, PointView y) {
  const double d = static_cast<double>(x.size());
  const double s = std::sinh(omega * t), c = std::cosh(omega * t);
  const double q = (dot(x, x) + dot(y, y)) * c - 2.0 * dot(x, y);
  return std::pow(omega / (2.0 * kPi * s), 0.5 * d) * std::exp(-omega * q / (2.0 * s));
}

}  // namespace fki::analytic
