#include <algorithm>

#include <fmt/format.h>

#include "fki/paths.hpp"
#include "fki/potentials.hpp"
#include "fki/quadrature.hpp"
#include "fki/statistics.hpp"
#include "fki/stochastics.hpp"

namespace fki {

namespace {

// Radial weight g(r) r^d per unit ln r.
double log_weight(int d, double r) {
  const double r2 = r * r;
  return d == 2 ? -std::log(r) * r2 : r2;
}

std::string point_string(PointView x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += fmt::format("{}{:.6g}", i ? ", " : "", x[i]);
  return s + ")";
}

std::vector<Point> probe_set(const ScalarField& f, std::vector<Point> grid) {
  for (const auto& p : grid) require_dimension(p, f.dimension(), "kato probe");
  for (const auto& s : f.singular_points()) {
    if (std::find(grid.begin(), grid.end(), s) == grid.end()) grid.push_back(s);
  }
  if (grid.empty()) grid.push_back(Point(f.dimension(), 0.0));
  return grid;
}

void check_rhos(std::span<const double> rhos) {
  if (rhos.empty()) throw ParameterError("rho sequence is empty");
  for (std::size_t k = 0; k < rhos.size(); ++k) {
    if (!(rhos[k] > 0.0 && rhos[k] <= 1.0)) throw ParameterError("rho values must lie in (0, 1]");
    if (k > 0 && !(rhos[k] < rhos[k - 1])) throw ParameterError("rho sequence must be strictly decreasing");
  }
}

}  // namespace

double truncated_coulomb_kernel(double rho, int d, PointView x) {
  const double r = norm(x);
  if (r >= rho) return 0.0;
  if (r == 0.0) return kInf;
  return d == 2 ? -std::log(r) : std::pow(r, 2.0 - d);
}

std::string to_string(KatoVerdict v) {
  switch (v) {
    case KatoVerdict::kato:
      return "kato";
    case KatoVerdict::not_kato:
      return "not_kato";
    case KatoVerdict::inconclusive:
      break;
  }
  return "inconclusive";
}

KatoProbe kato_probe(const ScalarField& f, PointView x, std::span<const double> rhos, const KatoQuadrature& q) {
  const int d = f.dimension();
  if (d != 2 && d != 3) throw DimensionError("the Kato analyzer supports d = 2 and d = 3");
  require_dimension(x, d, "kato_probe");
  check_rhos(rhos);
  KatoProbe out;
  out.x.assign(x.begin(), x.end());
  out.values.assign(rhos.size(), 0.0);
  if (f.is_zero()) return out;

  // Nearest singular point off the probe centre, if one falls inside the outer ball.
  double a_sing = 0.0;
  Point axis;
  for (const auto& s : f.singular_points()) {
    const double a = distance(s, x);
    if (a > 0.0 && a < rhos[0] && (a_sing == 0.0 || a < a_sing)) {
      a_sing = a;
      axis.resize(d);
      for (int i = 0; i < d; ++i) axis[i] = s[i] - x[i];
    }
  }
  const quad::SphereRule sphere = a_sing > 0.0
                                      ? quad::sphere_graded(d, q.angular_order, axis, q.grading_levels)
                                      : quad::sphere_uniform(d, q.angular_order);

  bool nonfinite = false;
  Point y(d);
  auto shell_mass = [&](double r) {
    double m = 0.0;
    for (std::size_t i = 0; i < sphere.size(); ++i) {
      auto w = sphere.direction(i);
      for (int c = 0; c < d; ++c) y[c] = x[c] + r * w[c];
      m += sphere.weights[i] * std::abs(f(y));
    }
    if (!std::isfinite(m)) nonfinite = true;
    return m;
  };
  // Integral over ln r in [lo, hi], with singular-shell breakpoints inserted.
  auto integrate_log = [&](double lo, double hi, bool limit_width) {
    std::vector<double> br{lo, hi};
    if (limit_width) {
      const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / q.max_log_panel)));
      for (int k = 1; k < pieces; ++k) br.push_back(lo + (hi - lo) * k / pieces);
    }
    if (a_sing > 0.0) {
      const double la = std::log(a_sing);
      if (la > lo && la < hi) br.push_back(la);
      for (int j = 1; j <= q.grading_levels; ++j) {
        for (double s : {1.0 - std::ldexp(1.0, -j), 1.0 + std::ldexp(1.0, -j)}) {
          const double l = la + std::log(s);
          if (l > lo && l < hi) br.push_back(l);
        }
      }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    const quad::Rule1D rule = quad::composite(br, q.radial_order);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double r = std::exp(rule.nodes[i]);
      s += rule.weights[i] * log_weight(d, r) * shell_mass(r);
    }
    return s;
  };

  // Core r < rho_last: dyadic panels in ell = -ln r.
  double ell_max = 256.0;
  double scale = 0.0;
  for (double c : x) scale = std::max(scale, std::abs(c));
  if (scale > 0.0) ell_max = std::min(ell_max, -std::log(1e-14 * scale));
  ell_max = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(std::max(ell_max, 2.0)))));
  const double ell0 = -std::log(rhos.back());
  std::vector<double> ell_breaks{ell0};
  for (double b = 1.0; b <= ell_max; b *= 2.0) {
    if (b > ell0) ell_breaks.push_back(b);
  }
  std::vector<double> panels;
  for (std::size_t k = 0; k + 1 < ell_breaks.size(); ++k) {
    panels.push_back(integrate_log(-ell_breaks[k + 1], -ell_breaks[k], true));
  }
  // Only full dyadic panels [2^k, 2^{k+1}] enter the tail fit.
  const std::size_t nfull = ell_breaks.size() >= 2 && ell_breaks[0] == ell_breaks[1] / 2.0
                                ? panels.size()
                                : (panels.empty() ? 0 : panels.size() - 1);
  double core = 0.0;
  for (double p : panels) core += p;

  double tail = 0.0;
  if (nonfinite) {
    out.converged = false;
    out.diverged = true;
    out.tail_power = -kInf;
  } else if (nfull >= 2) {
    const double last = panels.back(), prev = panels[panels.size() - 2];
    if (last == 0.0) {
      out.tail_power = kInf;
    } else if (prev <= 0.0) {
      out.tail_power = std::nan("");
    } else {
      const double ratio = last / prev;
      out.tail_power = 1.0 - std::log2(ratio);
      if (ratio < 1.0) tail = last * ratio / (1.0 - ratio);
    }
    out.converged = out.tail_power >= q.converge_power;
    out.diverged = out.tail_power <= q.diverge_power;
  } else {
    out.converged = false;
    out.tail_power = std::nan("");
  }

  if (out.diverged) {
    std::fill(out.values.begin(), out.values.end(), kInf);
    return out;
  }
  // Shells between consecutive radii, accumulated from the inside out.
  double acc = core + tail;
  out.values.back() = acc;
  for (std::size_t k = rhos.size() - 1; k-- > 0;) {
    acc += integrate_log(std::log(rhos[k + 1]), std::log(rhos[k]), true);
    if (nonfinite) {
      out.converged = false;
      out.diverged = true;
      std::fill(out.values.begin(), out.values.end(), kInf);
      return out;
    }
    out.values[k] = acc;
  }
  return out;
}

double kato_norm(const ScalarField& f, std::vector<Point> x_grid, const KatoQuadrature& q) {
  if (f.is_zero()) return 0.0;
  const double one[] = {1.0};
  double best = 0.0;
  for (const auto& x : probe_set(f, std::move(x_grid))) {
    const KatoProbe p = kato_probe(f, x, one, q);
    if (!p.converged) {
      throw QuadratureError(fmt::format("Kato radial integral does not converge at {} (tail exponent {:.3g})",
                                        point_string(x), p.tail_power));
    }
    best = std::max(best, p.values[0]);
  }
  return best;
}

KatoReport kato_smallness_profile(const ScalarField& f, std::vector<double> rho_sequence, std::vector<Point> x_grid,
                                  const KatoQuadrature& q) {
  check_rhos(rho_sequence);
  const bool add_unit = rho_sequence.front() < 1.0;
  if (add_unit) rho_sequence.insert(rho_sequence.begin(), 1.0);
  const auto probes = probe_set(f, std::move(x_grid));

  KatoReport rep;
  std::vector<double> best(rho_sequence.size(), 0.0);
  bool all_converged = true, any_diverged = false;
  for (const auto& x : probes) {
    const KatoProbe p = kato_probe(f, x, rho_sequence, q);
    for (std::size_t k = 0; k < best.size(); ++k) best[k] = std::max(best[k], p.values[k]);
    if (!std::isnan(p.tail_power)) rep.tail_power = std::min(rep.tail_power, p.tail_power);
    if (p.diverged) {
      any_diverged = true;
      rep.caveats.push_back(fmt::format("radial integral diverges at {} (tail exponent {:.3g})", point_string(x),
                                        p.tail_power));
    } else if (!p.converged) {
      all_converged = false;
      rep.caveats.push_back(fmt::format("radial integral unresolved at {} (tail exponent {:.3g})", point_string(x),
                                        p.tail_power));
    }
  }
  rep.kato_norm = best[0];
  for (std::size_t k = add_unit ? 1 : 0; k < best.size(); ++k) rep.profile.push_back({rho_sequence[k], best[k]});

  // Least-squares slope of ln(value) against ln(rho).
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : rep.profile) {
    if (p.value > 0.0 && std::isfinite(p.value)) pts.emplace_back(std::log(p.rho), std::log(p.value));
  }
  if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (auto [a, b] : pts) mx += a, my += b;
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0, sxx = 0;
    for (auto [a, b] : pts) sxy += (a - mx) * (b - my), sxx += (a - mx) * (a - mx);
    rep.decay_slope = sxx > 0 ? sxy / sxx : 0.0;
  }

  const auto& prof = rep.profile;
  bool decreasing = prof.size() >= 2;
  for (std::size_t k = 1; k < prof.size(); ++k) decreasing = decreasing && prof[k].value < prof[k - 1].value;
  const bool all_zero = std::all_of(prof.begin(), prof.end(), [](const ProfilePoint& p) { return p.value == 0.0; });
  if (any_diverged) {
    rep.verdict = KatoVerdict::not_kato;
  } else if (all_converged && all_zero) {
    rep.verdict = KatoVerdict::kato;
  } else if (all_converged && decreasing && rep.decay_slope > 0.0 &&
             prof.back().value <= q.epsilon_kato * prof.front().value) {
    rep.verdict = KatoVerdict::kato;
  } else {
    rep.verdict = KatoVerdict::inconclusive;
    if (all_converged) {
      rep.caveats.push_back(fmt::format("profile did not fall below {:.3g} of its first value", q.epsilon_kato));
    }
  }
  rep.caveats.push_back(fmt::format("finite-probe lower bound: supremum taken over {} probe points", probes.size()));
  return rep;
}

nlohmann::json KatoReport::to_json() const {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  nlohmann::json j;
  j["kato_norm"] = num(kato_norm);
  j["profile"] = nlohmann::json::array();
  for (const auto& p : profile) j["profile"].push_back({{"rho", p.rho}, {"value", num(p.value)}});
  j["verdict"] = to_string(verdict);
  j["tail_power"] = num(tail_power);
  j["decay_slope"] = num(decay_slope);
  j["caveats"] = caveats;
  return j;
}

MonteCarloValue brownian_kato_functional(const ScalarField& f, double t, const std::vector<Point>& x_grid,
                                         std::uint64_t n_paths, int n_steps, std::uint64_t seed,
                                         const Execution& exec) {
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  if (x_grid.empty()) throw ParameterError("x_grid is empty");
  if (n_paths < 1) throw ParameterError("n_paths must be positive");
  MonteCarloValue best;
  best.value = -kInf;
  for (std::size_t g = 0; g < x_grid.size(); ++g) {
    const Point& x = x_grid[g];
    require_dimension(x, f.dimension(), "brownian_kato_functional");
    auto parts = run_sharded(n_paths, exec, RunningStats{}, [&](std::uint64_t b, std::uint64_t e, RunningStats& st) {
      Path path;
      std::uint64_t hits = 0;
      for (std::uint64_t k = b; k < e; ++k) {
        PathSampler::brownian(path, x, t, n_steps, StreamId{seed, static_cast<std::uint32_t>(g), k});
        double s = 0.0;
        for (int i = 1; i <= n_steps; ++i) s += std::abs(capped(f(path[i]), f.cap(), hits, "scalar potential"));
        st.add(s * path.dt());
      }
    });
    const RunningStats st = merge_all(parts);
    if (st.mean > best.value) {
      best.value = st.mean;
      best.std_error = st.std_error();
      best.argmax = x;
    }
  }
  return best;
}

}  // namespace fki
