#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fki/estimators.hpp"
#include "fki/potentials.hpp"

namespace fki {

/// Outcome of one executable check; pass is statistic <= threshold.
struct CheckReport {
  std::string name;
  bool pass = false;
  double statistic = 0.0;
  double threshold = 0.0;
  nlohmann::json details = nlohmann::json::object();

  nlohmann::json to_json() const;
};

struct KernelSample {
  double t;
  Point x;
  Point y;
};

/// Relative rounding allowance for checks that hold exactly path by path.
inline constexpr double kPathwiseRounding = 1e-12;

/// Shared-seed comparison of |k_A| against k_0 (same V and domain, A removed).
/// statistic = max (|k_A| - k_0) / k_0.
CheckReport check_diamagnetic(const ProblemSpec& spec, const std::vector<KernelSample>& samples,
                              const SamplingOptions& opt);

/// Shared-seed comparison of apply_semigroup on `inner` against `outer` for psi >= 0,
/// where inner's domain is contained in outer's. statistic = max (u_inner - u_outer) / u_outer.
CheckReport check_domain_monotonicity(const ProblemSpec& inner, const ProblemSpec& outer,
                                      const std::function<double(PointView)>& psi, double t,
                                      const std::vector<Point>& points, const SamplingOptions& opt);

/// max over pairs of |k(x,y) - conj k(y,x)| / SE, also |Im k(x,x)| / SE on the diagonal.
CheckReport check_hermiticity(const ProblemSpec& spec, const std::vector<std::pair<Point, Point>>& pairs, double t,
                              const SamplingOptions& opt);

struct GridSpec {
  Point lo, hi;
  int cells_per_axis = 24;  // multiple of 3
};

/// k_{s+t}(x,y) against the midpoint convolution sum_z k_s(x,z) k_t(z,y) dz.
/// statistic = |difference| / (3 SE + quadrature error).
CheckReport check_semigroup(const ProblemSpec& spec, double s, double t, PointView x, PointView y,
                            const GridSpec& grid, const SamplingOptions& opt);

/// Bridge expectation of f(b(s)) against the reweighted free expectation.
CheckReport check_girsanov(const std::string& name, const std::function<double(PointView)>& f, double s, double t,
                           PointView x, PointView y, const SamplingOptions& opt);

/// k_t(x_k, y) along x_k = boundary_point + delta_k * (inward normal).
CheckReport check_boundary_vanishing(const ProblemSpec& spec, PointView boundary_point, PointView y,
                                     const std::vector<double>& deltas, double t, const SamplingOptions& opt);

struct ConvergenceOptions {
  double threshold = 0.05;
};

/// sup over samples of |k^{base} - k^{approx_m}| for each approximant, shared seeds.
/// statistic is the final sup-difference, or +infinity if the trend is not monotone.
CheckReport potential_convergence_experiment(const ProblemSpec& base, const std::vector<ProblemSpec>& approximants,
                                             const std::vector<KernelSample>& samples, const SamplingOptions& opt,
                                             const ConvergenceOptions& copt = {});

/// Penalty kernels with V + mu U_n on the whole space against the shared-seed
/// limit E[e^{-mu int U_inf} Xi] on the domain (naive grid killing).
CheckReport soft_kill_convergence(const Domain& domain, double mu, const std::vector<double>& n_sequence, double t,
                                  PointView x, PointView y, const SamplingOptions& opt);

/// || e^{-tH} psi - psi ||_p by midpoint quadrature over the grid, along a decreasing t sequence.
CheckReport strong_continuity_experiment(const ProblemSpec& spec, const std::function<double(PointView)>& psi,
                                         double p, const std::vector<double>& t_sequence, const GridSpec& grid,
                                         const SamplingOptions& opt, double threshold);

/// E_x[Xi_{Lambda,t}] from boundary points, with the delayed survival E_x[Xi_{Lambda,t-tau}(w(.+tau))]
/// along tau in the details. pass means the points behave as regular.
CheckReport regularity_probe(const Domain& domain, const std::vector<Point>& boundary_points, double t,
                             const std::vector<double>& tau_sequence, const SamplingOptions& opt,
                             double threshold = 0.01);

/// Gaussian-conditional bridge against the drift construction: mean and variance at interior
/// grid times, z-scores of the differences.
CheckReport check_bridge_constructions(PointView x, PointView y, double t, const SamplingOptions& opt);

/// Left-point integral on bridge increments against the drift form, paired per path.
CheckReport check_bridge_line_integral(const VectorField& a, PointView x, PointView y, double t,
                                       const SamplingOptions& opt);

}  // namespace fki
