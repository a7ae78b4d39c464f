#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "fki/fields.hpp"
#include "fki/geometry.hpp"
#include "fki/parallel.hpp"

namespace fki {

// ---------------------------------------------------------------------------
// Smooth building blocks

/// C^infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s);
double smooth_step_derivative(double s);

/// Radial cutoff equal to 1 on |x| < 1/2 and 0 outside |x| < 3/4.
double plateau_cutoff(double r);
double plateau_cutoff_derivative(double r);

// ---------------------------------------------------------------------------
// Built-in potentials

/// Theta(x) / (|x|^2 |ln|x||^mu), d >= 3. Kato iff mu > 1.
ScalarField make_v_mu(double mu, int d);
/// (x/|x|) V_mu(x)^{1/2} with analytic divergence. A in H iff mu > 2.
VectorField make_a_mu(double mu, int d);
/// A_h(x) = (0, h x_1) on R^2; constant field of strength h, zero divergence.
VectorField make_landau(double h, int d = 2);
/// omega^2 |x|^2 / 2.
ScalarField make_harmonic(double omega, int d);
/// -q / |x| on R^3.
ScalarField make_coulomb(double charge, int d = 3);
ScalarField make_constant(double c, int d);
/// c on |x| < radius, 0 elsewhere.
ScalarField make_indicator_well(double c, double radius, int d);
/// min(U_inf, cutoff) with U_inf = sum_l |grad theta_l|^2 + dist^{-3} inside the
/// domain and +infinity outside. cutoff = +infinity gives U_inf itself.
ScalarField make_penalty(const Domain& domain, double cutoff);
/// (x_2, -x_1) exp(|x|^4) on R^2.
VectorField make_growth_example(int d = 2);

/// Named potential with numeric parameters, as declared in config files.
struct PotentialSpec {
  std::string kind;
  int dimension = 2;
  std::map<std::string, double> params;
  std::optional<Domain> domain;  // penalty only
};

using AnyField = std::variant<ScalarField, VectorField>;

AnyField make_builtin(const PotentialSpec& spec);
ScalarField make_scalar(const PotentialSpec& spec);
VectorField make_vector(const PotentialSpec& spec);

// ---------------------------------------------------------------------------
// Kato-class analysis

/// Truncated Newton-Coulomb kernel g_rho: -ln|x| (d=2) or |x|^{2-d} (d>=3) on B_rho.
double truncated_coulomb_kernel(double rho, int d, PointView x);

enum class KatoVerdict { kato, not_kato, inconclusive };
std::string to_string(KatoVerdict v);

struct KatoQuadrature {
  int radial_order = 10;
  int angular_order = 10;
  /// Largest panel width in ln r for the shells between profile radii.
  double max_log_panel = 0.5;
  /// Off-centre singularities: number of geometric refinement levels.
  int grading_levels = 10;
  /// Fitted exponent p of the ln(1/r) tail: converged if p >= converge_power,
  /// divergent if p <= diverge_power.
  double converge_power = 1.25;
  double diverge_power = 1.05;
  /// Relative smallness threshold for a kato verdict (last / first profile value).
  double epsilon_kato = 0.25;
};

struct KatoProbe {
  Point x;
  /// int_{B_rho_k(x)} g_{rho_k}(x-y) |f(y)| dy for each requested rho_k.
  std::vector<double> values;
  /// Exponent p of the innermost radial tail, integrand ~ ln(1/r)^{-p}.
  double tail_power = kInf;
  bool converged = true;
  bool diverged = false;
};

/// Polar quadrature centred at x; the kernel singularity sits in the radial weight.
/// rhos must be strictly decreasing in (0, 1].
KatoProbe kato_probe(const ScalarField& f, PointView x, std::span<const double> rhos,
                     const KatoQuadrature& q = {});

/// max over the probe set (plus the field's singular points) of int g_1(x-y)|f(y)| dy.
/// The finite probe set makes this a lower bound of the true supremum.
/// Throws QuadratureError if the radial integral does not converge.
double kato_norm(const ScalarField& f, std::vector<Point> x_grid, const KatoQuadrature& q = {});

struct ProfilePoint {
  double rho;
  double value;
};

struct KatoReport {
  double kato_norm = 0.0;  // +inf when the radial integral diverges
  std::vector<ProfilePoint> profile;
  KatoVerdict verdict = KatoVerdict::inconclusive;
  double tail_power = kInf;  // smallest fitted tail exponent over the probes
  double decay_slope = 0.0;  // least-squares slope of ln(value) against ln(rho)
  std::vector<std::string> caveats;

  nlohmann::json to_json() const;
};

KatoReport kato_smallness_profile(const ScalarField& f, std::vector<double> rho_sequence,
                                  std::vector<Point> x_grid, const KatoQuadrature& q = {});

struct MonteCarloValue {
  double value = 0.0;
  double std_error = 0.0;
  Point argmax;
};

/// max over x_grid of E_x[int_0^t |f(w(s))| ds] from right-point sums, so the
/// deterministic start w(0) = x never samples a singularity.
MonteCarloValue brownian_kato_functional(const ScalarField& f, double t, const std::vector<Point>& x_grid,
                                         std::uint64_t n_paths, int n_steps, std::uint64_t seed,
                                         const Execution& exec = {});

// ---------------------------------------------------------------------------
// Mollification delta_r * (Theta_R F)

/// delta_1 = C exp(-1/(1-|x|^2)) on the unit ball with unit mass, delta_r(x) = r^{-d} delta_1(x/r),
/// and Theta_R = delta_1 * chi_{B_R}.
class Mollifier {
 public:
  Mollifier(int d, double r, double big_r);

  int dimension() const { return d_; }
  double r() const { return r_; }
  double big_r() const { return big_r_; }

  /// delta_r(x).
  double bump(PointView x) const;
  /// delta_1 at |x| = rho.
  double bump_radial(double rho) const;
  /// Theta_R at |x| = rho and its radial derivative.
  double cutoff(double rho) const;
  double cutoff_derivative(double rho) const;

 private:
  struct Table;
  int d_;
  double r_, big_r_;
  double normalisation_;
  std::shared_ptr<const Table> table_;
};

struct MollifyOptions {
  int radial_order = 8;
  int angular_order = 10;
  /// Radial fields centred at the origin are tabulated in |x| and interpolated.
  bool tabulate_radial = true;
};

ScalarField mollify(const ScalarField& f, double r, double big_r, const MollifyOptions& opt = {});
VectorField mollify(const VectorField& a, double r, double big_r, const MollifyOptions& opt = {});

}  // namespace fki
