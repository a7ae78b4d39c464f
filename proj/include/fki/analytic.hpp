#pragma once

#include <complex>

#include "fki/core.hpp"

namespace fki::analytic {

/// (2 pi t)^{-d/2} exp(-|x-y|^2 / 2t), the kernel of e^{t Delta / 2}.
double free_kernel(double t, PointView x, PointView y);

/// Dirichlet kernel of {normal.x > offset} by the method of images.
double half_space_kernel(double t, PointView x, PointView y, PointView normal, double offset);

/// Kernel of (1/2)(-i grad - A)^2 on R^2 for A(x) = (0, h x_1), h >= 0.
std::complex<double> landau_kernel(double h, double t, PointView x, PointView y);

/// Mehler kernel of -Delta/2 + omega^2 |x|^2 / 2 on R^d.
double mehler_kernel(double omega, double t, PointView x, PointView y);

}  // namespace fki::analytic
