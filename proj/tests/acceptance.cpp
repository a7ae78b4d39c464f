// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Pass a list of criterion numbers to run a subset.

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "fki/analytic.hpp"
#include "fki/estimators.hpp"
#include "fki/potentials.hpp"
#include "fki/validation.hpp"

using namespace fki;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// max(3 SE, rel * oracle)
bool within(double est, double se, double oracle, double rel) {
  return std::abs(est - oracle) <= std::max(3.0 * se, rel * std::abs(oracle));
}

// Doubling n_steps must not make the error larger beyond noise.
bool bias_shrinks(double e1, double e2, double oracle, double se2) {
  return std::abs(e2 - oracle) <= std::max(std::abs(e1 - oracle), 3.0 * se2);
}

const Point kOrigin2{0.0, 0.0};

Outcome free_kernel_exact() {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec spec = ProblemSpec::free(Domain::full_space(2));
  SamplingOptions opt;
  opt.seed = 11;
  const Point x{0.3, -0.2}, y{1.1, 0.4};
  const Estimate e = kernel(spec, 1.0, x, y, opt);
  const double dx = 0.8, dy = 0.6;
  const double oracle = std::exp(-(dx * dx + dy * dy) / 2.0) / (2.0 * std::acos(-1.0));
  const double err = std::abs(e.mean - std::complex<double>(oracle, 0.0));
  const double secs = seconds_since(t0);
  const bool pass = err <= 4.0 * std::numeric_limits<double>::epsilon() * oracle && e.std_error == 0.0 && secs < 1.0;
  return {pass, fmt::format("k = {:.17g}, oracle {:.17g}, |err| {:.2e}, stderr {}, {:.2f}s", e.mean.real(), oracle,
                            err, e.std_error, secs)};
}

// Estimates at n_steps and 2 n_steps against an oracle.
struct Doubling {
  Estimate coarse, fine;
};

Doubling doubled(const ProblemSpec& spec, PointView x, PointView y, std::uint64_t seed) {
  SamplingOptions opt;
  opt.n_paths = 100000;
  opt.n_steps = 1000;
  opt.seed = seed;
  Doubling d;
  d.coarse = kernel(spec, 1.0, x, y, opt);
  opt.n_steps = 2000;
  d.fine = kernel(spec, 1.0, x, y, opt);
  return d;
}

Outcome dirichlet_half_plane() {
  const auto t0 = std::chrono::steady_clock::now();
  const Domain half = Domain::half_space({1.0, 0.0}, 0.0);
  const ProblemSpec spec(VectorField::zero(2), ScalarField::zero(2), half, KillingMode::corrected);
  const Point x{1.0, 0.0};
  const double oracle = analytic::half_space_kernel(1.0, x, x, Point{1.0, 0.0}, 0.0);
  const Doubling d = doubled(spec, x, x, 21);
  const double secs = seconds_since(t0);
  const bool ok = within(d.coarse.mean.real(), d.coarse.std_error, oracle, 0.01);
  const bool shrink = bias_shrinks(d.coarse.mean.real(), d.fine.mean.real(), oracle, d.fine.std_error);
  // quoted value 0.137622; the image formula gives 0.137616, both are held to the same tolerance
  const bool reported = within(d.coarse.mean.real(), d.coarse.std_error, 0.137622, 0.01);
  return {ok && shrink && reported && secs < 60.0,
          fmt::format("k = {:.6f} +- {:.1e} (n=1000), {:.6f} +- {:.1e} (n=2000), oracle {:.6f}, {:.1f}s",
                      d.coarse.mean.real(), d.coarse.std_error, d.fine.mean.real(), d.fine.std_error, oracle, secs)};
}

Outcome landau() {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec spec(make_landau(1.0), ScalarField::zero(2), Domain::full_space(2));
  const double oracle = 1.0 / (4.0 * std::acos(-1.0) * std::sinh(0.5));
  const double closed = std::abs(analytic::landau_kernel(1.0, 1.0, kOrigin2, kOrigin2));
  const Doubling d = doubled(spec, kOrigin2, kOrigin2, 31);
  const double secs = seconds_since(t0);
  const double mod = std::abs(d.coarse.mean);
  const bool ok = within(mod, d.coarse.std_error, oracle, 0.01) && std::abs(closed - oracle) < 1e-12;
  const bool phase = std::abs(d.coarse.mean.imag()) <= 3.0 * d.coarse.im_std_error;
  const bool shrink = bias_shrinks(mod, std::abs(d.fine.mean), oracle, d.fine.std_error);
  const double k0 = analytic::free_kernel(1.0, kOrigin2, kOrigin2);
  const double ratio = mod / k0;
  const bool dia = within(ratio, d.coarse.std_error / k0, 0.9595, 0.01);
  return {ok && phase && shrink && dia && secs < 60.0,
          fmt::format("|k| = {:.6f} +- {:.1e}, im {:.1e} +- {:.1e}, n=2000 |k| {:.6f}, oracle {:.6f}, "
                      "ratio to free {:.4f}, {:.1f}s",
                      mod, d.coarse.std_error, d.coarse.mean.imag(), d.coarse.im_std_error, std::abs(d.fine.mean),
                      oracle, ratio, secs)};
}

Outcome mehler() {
  const auto t0 = std::chrono::steady_clock::now();
  const ProblemSpec spec(VectorField::zero(2), make_harmonic(1.0, 2), Domain::full_space(2));
  const double oracle = 1.0 / (2.0 * std::acos(-1.0) * std::sinh(1.0));
  const Doubling d = doubled(spec, kOrigin2, kOrigin2, 41);
  const double secs = seconds_since(t0);
  const bool ok = within(d.coarse.mean.real(), d.coarse.std_error, oracle, 0.01);
  const bool shrink = bias_shrinks(d.coarse.mean.real(), d.fine.mean.real(), oracle, d.fine.std_error);
  const bool closed = std::abs(analytic::mehler_kernel(1.0, 1.0, kOrigin2, kOrigin2) - oracle) < 1e-12;
  return {ok && shrink && closed && secs < 60.0,
          fmt::format("k = {:.6f} +- {:.1e} (n=1000), {:.6f} (n=2000), oracle {:.6f}, {:.1f}s", d.coarse.mean.real(),
                      d.coarse.std_error, d.fine.mean.real(), oracle, secs)};
}

Outcome box_trace() {
  const auto t0 = std::chrono::steady_clock::now();
  const double pi = std::acos(-1.0);
  const ProblemSpec spec = ProblemSpec::free(Domain::box({0.0, 0.0}, {pi, pi}));
  double s = 0.0;
  for (int n = 1; n < 40; ++n) s += std::exp(-n * n / 2.0);
  const double oracle = s * s;
  SamplingOptions opt;
  opt.n_paths = 1000;
  opt.n_steps = 250;
  opt.seed = 51;
  TraceOptions topt;
  topt.cells_per_axis = 24;
  const TraceEstimate tr = trace(spec, 1.0, opt, topt);
  const double secs = seconds_since(t0);
  const double rel = std::abs(tr.estimate.mean.real() - oracle) / oracle;
  return {rel <= 0.05 && secs < 300.0,
          fmt::format("tr = {:.5f} (mc {:.1e}, quad {:.1e}), oracle {:.5f}, rel err {:.3f}, {:.1f}s",
                      tr.estimate.mean.real(), tr.mc_error, tr.quadrature_error, oracle, rel, secs)};
}

std::vector<KernelSample> random_samples(int n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> pos(-1.5, 1.5), time(0.2, 1.5);
  std::vector<KernelSample> out;
  for (int i = 0; i < n; ++i) {
    const double t = time(gen);
    const double x0 = pos(gen), x1 = pos(gen), y0 = pos(gen), y1 = pos(gen);
    out.push_back({t, {x0, x1}, {y0, y1}});
  }
  return out;
}

Outcome diamagnetic_suite() {
  const auto samples = random_samples(20, 61);
  SamplingOptions opt;
  opt.n_paths = 2000;
  opt.n_steps = 200;
  opt.seed = 61;
  const ProblemSpec lan(make_landau(1.0), ScalarField::zero(2), Domain::full_space(2));
  const ProblemSpec grow(make_growth_example(2), ScalarField::zero(2), Domain::full_space(2));
  const CheckReport a = check_diamagnetic(lan, samples, opt);
  const CheckReport b = check_diamagnetic(grow, samples, opt);
  return {a.pass && b.pass, fmt::format("{} samples; max relative excess landau {:.2e}, growth_example {:.2e}",
                                        samples.size(), a.statistic, b.statistic)};
}

Outcome domain_monotonicity() {
  std::mt19937 gen(71);
  std::uniform_real_distribution<double> u0(0.05, 2.0), u1(-1.0, 1.0);
  std::vector<Point> points;
  for (int i = 0; i < 20; ++i) {
    const double a = u0(gen), b = u1(gen);
    points.push_back({a, b});
  }
  const ProblemSpec inner = ProblemSpec::free(Domain::half_space({1.0, 0.0}, 0.0));
  const ProblemSpec outer = ProblemSpec::free(Domain::full_space(2));
  const auto psi = [](PointView z) { return std::exp(-((z[0] - 1.0) * (z[0] - 1.0) + z[1] * z[1]) / 2.0); };
  SamplingOptions opt;
  opt.n_paths = 2000;
  opt.n_steps = 200;
  opt.seed = 71;
  const CheckReport r = check_domain_monotonicity(inner, outer, psi, 1.0, points, opt);
  return {r.pass, fmt::format("{} points; max relative excess {:.2e}", points.size(), r.statistic)};
}

Outcome hermiticity_and_semigroup() {
  struct Case {
    std::string name;
    ProblemSpec spec;
    Point x, y;
  };
  std::vector<Case> cases{
      {"free", ProblemSpec::free(Domain::full_space(2)), {0.5, 0.0}, {-0.3, 0.4}},
      {"half-plane", ProblemSpec::free(Domain::half_space({1.0, 0.0}, 0.0)), {0.8, 0.1}, {0.5, -0.4}},
      {"landau", ProblemSpec(make_landau(1.0), ScalarField::zero(2), Domain::full_space(2)), {0.5, 0.0}, {-0.3, 0.4}},
  };
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    SamplingOptions opt;
    opt.n_paths = 4000;
    opt.n_steps = 200;
    opt.seed = 81 + i;
    const std::vector<std::pair<Point, Point>> pairs{{c.x, c.y}, {c.x, c.x}, {c.y, Point{1.2, 0.9}}};
    const CheckReport h = check_hermiticity(c.spec, pairs, 1.0, opt);
    GridSpec g;
    g.cells_per_axis = 24;
    g.lo = {-4.0, -4.0};
    g.hi = {4.0, 4.0};
    opt.n_paths = 2000;
    opt.n_steps = 50;
    const CheckReport s = check_semigroup(c.spec, 0.5, 0.5, c.x, c.y, g, opt);
    pass = pass && h.pass && s.pass;
    detail += fmt::format("{}{}: hermiticity z {:.2f}, semigroup {:.2f}", i ? "; " : "", c.name, h.statistic,
                          s.statistic);
  }
  return {pass, detail};
}

Outcome khasminskii() {
  const ScalarField v = make_indicator_well(-1.0, 1.0, 2);
  std::vector<Point> grid;
  for (int i = -2; i <= 2; ++i) {
    for (int j = -2; j <= 2; ++j) grid.push_back({0.5 * i, 0.5 * j});
  }
  SamplingOptions opt;
  opt.n_paths = 20000;
  opt.seed = 91;
  const double t = 0.1;
  const KhasminskiiResult k = khasminskii_bound(v, t, grid, opt);
  const ProblemSpec spec(VectorField::zero(2), v, Domain::full_space(2));
  double direct = -kInf, direct_se = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Estimate e =
        apply_semigroup(spec, [](PointView) { return std::complex<double>(1.0, 0.0); }, t, grid[i], opt,
                        static_cast<std::uint32_t>(i));
    if (e.mean.real() > direct) direct = e.mean.real(), direct_se = e.std_error;
  }
  const bool pass = k.available && k.bound >= direct - 3.0 * direct_se;
  return {pass, fmt::format("alpha {:.4f} +- {:.1e}, bound {:.4f}, direct sup {:.4f} +- {:.1e}", k.alpha,
                            k.alpha_std_error, k.bound, direct, direct_se)};
}

Outcome kato_analyzer() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> rho{1.0, 0.1, 0.01, 0.001};
  const std::vector<Point> probes{{0.0, 0.0, 0.0}, {0.3, 0.0, 0.0}};
  struct Row {
    std::string name;
    ScalarField f;
    KatoVerdict expected;
  };
  std::vector<Row> rows{
      {"v_mu(2)", make_v_mu(2.0, 3), KatoVerdict::kato},
      {"v_mu(1/2)", make_v_mu(0.5, 3), KatoVerdict::not_kato},
      {"div a_mu(3/2)", abs(divergence_field(make_a_mu(1.5, 3))), KatoVerdict::not_kato},
      {"div a_mu(3)", abs(divergence_field(make_a_mu(3.0, 3))), KatoVerdict::kato},
      {"coulomb", make_coulomb(1.0, 3), KatoVerdict::kato},
  };
  bool pass = true;
  std::string detail;
  double worst = 0.0;
  for (const auto& r : rows) {
    const auto t1 = std::chrono::steady_clock::now();
    const KatoReport rep = kato_smallness_profile(r.f, rho, probes);
    worst = std::max(worst, seconds_since(t1));
    pass = pass && rep.verdict == r.expected;
    detail += fmt::format("{}{} {}", detail.empty() ? "" : ", ", r.name, to_string(rep.verdict));
  }
  pass = pass && worst < 60.0;
  return {pass, fmt::format("{}; slowest {:.1f}s, total {:.1f}s", detail, worst, seconds_since(t0))};
}

Outcome soft_kill() {
  const Domain half = Domain::half_space({1.0, 0.0}, 0.0);
  SamplingOptions opt;
  opt.n_paths = 20000;
  opt.n_steps = 1000;
  opt.seed = 111;
  const Point x{1.0, 0.0};
  const CheckReport r = soft_kill_convergence(half, 1.0, {10, 100, 1000, 10000}, 1.0, x, x, opt);
  return {r.pass, fmt::format("z(n=1e4 vs hard kill) {:.2f}; {}", r.statistic, r.details.dump())};
}

Outcome girsanov() {
  SamplingOptions opt;
  opt.n_paths = 20000;
  opt.n_steps = 100;
  opt.seed = 121;
  const Point x{0.2, 0.1}, y{0.7, -0.4};
  const CheckReport a = check_girsanov("one", [](PointView) { return 1.0; }, 0.5, 1.0, x, y, opt);
  const CheckReport b = check_girsanov("coordinate", [](PointView z) { return z[0]; }, 0.5, 1.0, x, y, opt);
  const CheckReport c =
      check_girsanov("indicator", [](PointView z) { return z[0] > 0.0 ? 1.0 : 0.0; }, 0.5, 1.0, x, y, opt);
  return {a.pass && b.pass && c.pass,
          fmt::format("z: one {:.2f}, coordinate {:.2f}, indicator {:.2f}", a.statistic, b.statistic, c.statistic)};
}

Outcome continuity_trends() {
  SamplingOptions opt;
  opt.n_paths = 2000;
  opt.n_steps = 20;
  opt.seed = 131;
  const auto bump = [](PointView z) {
    const double r2 = z[0] * z[0] + z[1] * z[1];
    return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
  };
  GridSpec g;
  g.cells_per_axis = 24;
  g.lo = {-1.5, -1.5};
  g.hi = {1.5, 1.5};
  const std::vector<double> ts{0.1, 0.03, 0.01, 0.003};
  const CheckReport free_c =
      strong_continuity_experiment(ProblemSpec::free(Domain::full_space(2)), bump, 2.0, ts, g, opt, 0.05);
  // Dirichlet half-plane with the bump well inside.
  const auto shifted = [&](PointView z) { return bump(Point{z[0] - 2.0, z[1]}); };
  GridSpec gh = g;
  gh.lo = {0.5, -1.5};
  gh.hi = {3.5, 1.5};
  const CheckReport half_c = strong_continuity_experiment(ProblemSpec::free(Domain::half_space({1.0, 0.0}, 0.0)),
                                                          shifted, 2.0, ts, gh, opt, 0.05);

  // Landau strengths h_m -> 1 with shared seeds.
  const ProblemSpec base(make_landau(1.0), ScalarField::zero(2), Domain::full_space(2));
  std::vector<ProblemSpec> approx;
  for (double dh : {0.5, 0.25, 0.125, 0.0625}) approx.emplace_back(make_landau(1.0 + dh), ScalarField::zero(2),
                                                                   Domain::full_space(2));
  const std::vector<KernelSample> samples{{0.5, {0.0, 0.0}, {0.0, 0.0}},
                                          {1.0, {0.0, 0.0}, {0.5, 0.0}},
                                          {1.0, {0.3, -0.2}, {-0.4, 0.6}},
                                          {0.7, {-0.5, 0.5}, {0.5, 0.5}}};
  SamplingOptions kopt;
  kopt.n_paths = 4000;
  kopt.n_steps = 200;
  kopt.seed = 132;
  const CheckReport lan = potential_convergence_experiment(base, approx, samples, kopt, {0.05});
  return {free_c.pass && half_c.pass && lan.pass,
          fmt::format("strong continuity free {:.2e}, half-plane {:.2e}; landau h_m sup-diff {:.2e}",
                      free_c.statistic, half_c.statistic, lan.statistic)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"free kernel exactness", free_kernel_exact},
      {"Dirichlet half-plane", dirichlet_half_plane},
      {"Landau kernel", landau},
      {"Mehler oscillator", mehler},
      {"box trace", box_trace},
      {"pathwise diamagnetic", diamagnetic_suite},
      {"domain monotonicity", domain_monotonicity},
      {"hermiticity and semigroup law", hermiticity_and_semigroup},
      {"Khasminskii bound", khasminskii},
      {"Kato analyzer", kato_analyzer},
      {"soft-kill convergence", soft_kill},
      {"Girsanov identity", girsanov},
      {"continuity trends", continuity_trends},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    fmt::print("criterion {:2d} {:<32} {}  {}\n", id, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
