#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>

#include "fki/fields.hpp"
#include "fki/geometry.hpp"
#include "fki/parallel.hpp"

namespace fki {

/// H_Lambda(A, V): vector potential, scalar potential and configuration space.
struct ProblemSpec {
  VectorField a;
  ScalarField v;
  Domain domain;
  KillingMode killing;

  ProblemSpec(VectorField a, ScalarField v, Domain domain);
  ProblemSpec(VectorField a, ScalarField v, Domain domain, KillingMode killing);

  /// A = 0, V = 0 on the given domain.
  static ProblemSpec free(Domain domain);

  int dimension() const { return domain.dimension(); }
};

/// Complex Monte Carlo mean with its combined standard error
/// sqrt(SE(re)^2 + SE(im)^2).
struct Estimate {
  std::complex<double> mean{0.0, 0.0};
  double std_error = 0.0;
  double re_std_error = 0.0;
  double im_std_error = 0.0;
  std::uint64_t n_paths = 0;
  int n_steps = 0;
  std::uint64_t cap_hits = 0;
  std::uint64_t seed = 0;
};

/// n_steps = max(100, ceil(t / 1e-3)).
int default_n_steps(double t);

struct SamplingOptions {
  std::uint64_t n_paths = 100000;
  int n_steps = 0;  // 0 selects default_n_steps(t)
  std::uint64_t seed = 0;
  Execution exec{};

  int steps_for(double t) const { return n_steps > 0 ? n_steps : default_n_steps(t); }
};

using ComplexFunction = std::function<std::complex<double>(PointView)>;

/// E_x[e^{-S_t(A,V|w)} Xi_{Lambda,t}(w) psi(w(t))] over free paths from x.
Estimate apply_semigroup(const ProblemSpec& spec, const ComplexFunction& psi, double t, PointView x,
                         const SamplingOptions& opt, std::uint32_t stream = 0);

/// (2 pi t)^{-d/2} e^{-|x-y|^2/2t} E_{0,x}^{t,y}[e^{-S_t(A,V|b)} Xi_{Lambda,t}(b)].
Estimate kernel(const ProblemSpec& spec, double t, PointView x, PointView y, const SamplingOptions& opt,
                std::uint32_t stream = 0);

/// Entry (i, j) uses stream i * ys.size() + j.
std::vector<std::vector<Estimate>> kernel_grid(const ProblemSpec& spec, double t, const std::vector<Point>& xs,
                                               const std::vector<Point>& ys, const SamplingOptions& opt);

struct TraceOptions {
  /// Midpoint cells per axis; must be divisible by 3.
  int cells_per_axis = 30;
  /// Integration box for unbounded domains.
  std::optional<std::pair<Point, Point>> box;
};

struct TraceEstimate {
  Estimate estimate;       // std_error combines both parts below
  double mc_error = 0.0;
  double quadrature_error = 0.0;  // |Q_N - Q_{N/3}| / 8
  int cells_per_axis = 0;
};

/// Midpoint quadrature of the diagonal kernel estimates over Lambda.
TraceEstimate trace(const ProblemSpec& spec, double t, const SamplingOptions& opt, const TraceOptions& topt = {});

struct KhasminskiiResult {
  double alpha = 0.0;
  double alpha_std_error = 0.0;
  Point argmax;
  bool available = false;
  double bound = kInf;  // 1/(1 - alpha) when available
};

/// alpha = max over x_grid of E_x[int_0^t V^-(w(s)) ds].
KhasminskiiResult khasminskii_bound(const ScalarField& v, double t, const std::vector<Point>& x_grid,
                                    const SamplingOptions& opt);

}  // namespace fki
