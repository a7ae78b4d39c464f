#pragma once

#include <functional>
#include <vector>

#include "fki/core.hpp"

namespace fki::quad {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; supported orders are 4, 6, 8, 10, 16, 20, 30.
const Rule1D& gauss_legendre(int order);

/// Composite Gauss rule of the given order over the panels [b_k, b_{k+1}].
Rule1D composite(const std::vector<double>& breaks, int order);

/// Quadrature on the unit sphere S^{d-1}, d in {2, 3}; weights sum to |S^{d-1}|.
struct SphereRule {
  int dim = 0;
  std::vector<double> directions;  // row-major, dim entries per node
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  PointView direction(std::size_t i) const {
    return {directions.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};

/// Product rule, exact for low-degree spherical harmonics.
SphereRule sphere_uniform(int d, int order);

/// Rule refined geometrically toward `axis`: d=3 grades the polar angle toward
/// zero, d=2 grades the circle angle toward the axis direction from both sides.
SphereRule sphere_graded(int d, int order, PointView axis, int levels);

/// Sum of w_i f(x_i).
double integrate(const Rule1D& rule, const std::function<double(double)>& f);

}  // namespace fki::quad
