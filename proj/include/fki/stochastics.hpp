#pragma once

#include <complex>
#include <cstdint>

#include "fki/fields.hpp"
#include "fki/geometry.hpp"
#include "fki/paths.hpp"

namespace fki {

/// Discretised Euclidean action S_t(A,V|w) of one path.
struct ActionValue {
  double ito_term = 0.0;  // sum_i A(w_i).(w_{i+1} - w_i)
  double div_term = 0.0;  // (1/2) sum_i div A(w_i) dt
  double v_term = 0.0;    // sum_i V(w_i) dt
  std::uint64_t cap_hits = 0;

  std::complex<double> total() const { return {v_term, ito_term + div_term}; }
  /// e^{-S}; its modulus is e^{-v_term} by construction.
  std::complex<double> weight() const { return std::polar(std::exp(-v_term), -(ito_term + div_term)); }
};

struct SurvivalWeight {
  double value = 1.0;
  KillingMode mode = KillingMode::naive;
};

/// Applies the field cap to a raw value, counting clamps. Throws when the value
/// is non-finite and no cap is configured.
double capped(double raw, const std::optional<double>& cap, std::uint64_t& hits, const char* what);

/// Left-point (Ito) sum of A(w_i).(w_{i+1} - w_i).
double ito_integral(const VectorField& a, const Path& path, std::uint64_t* cap_hits = nullptr);
/// Left-point sum of f(w_i) dt with f's cap applied.
double time_integral(const ScalarField& f, const Path& path, std::uint64_t* cap_hits = nullptr);
ActionValue action(const VectorField& a, const ScalarField& v, const Path& path);

/// Ito form on a bridge with its driving path: sum A(b_i).(w_{i+1}-w_i) + sum A(b_i).(y-b_i)/(t-s_i) dt.
double bridge_ito_integral_drift_form(const VectorField& a, const Path& bridge, const Path& driver);

/// naive: 1 iff w_1..w_n all lie in the domain.
/// corrected: naive factor times prod_i (1 - exp(-2 d_i d_{i+1} / dt)), d_i the boundary distance.
SurvivalWeight survival(const Domain& domain, const Path& path, KillingMode mode);

}  // namespace fki
