#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fki/estimators.hpp"
#include "fki/potentials.hpp"

namespace fki {

/// Unreadable, malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every numeric default of the command-line tool lives here.
struct Defaults {
  static constexpr std::uint64_t n_paths = 100000;
  static constexpr double max_step = 1e-3;  // n_steps = max(100, ceil(t / max_step))
  static constexpr double v_max = 1e6;
  static constexpr int shards = 16;
  static constexpr std::uint64_t seed = 0;
  static constexpr int trace_cells = 30;
  static constexpr double kato_epsilon = 0.25;
  static constexpr double s_split = 0.5;  // semigroup check: s = s_split * t
  static constexpr int grid_cells = 24;
  static constexpr double regularity_threshold = 0.01;
  static constexpr double continuity_threshold = 0.05;
  static constexpr double convergence_threshold = 0.05;
};

struct RunSection {
  std::vector<double> t;
  std::vector<Point> x;
  std::vector<Point> y;
  std::uint64_t n_paths = Defaults::n_paths;
  int n_steps = 0;
  std::uint64_t seed = Defaults::seed;
  std::optional<KillingMode> killing;
  double v_max = Defaults::v_max;
  int shards = Defaults::shards;
};

struct ApplySection {
  std::string psi = "gaussian";  // one | gaussian | bump
  double width = 1.0;
  Point center;
};

struct TraceSection {
  int cells_per_axis = Defaults::trace_cells;
  std::optional<std::pair<Point, Point>> box;
};

struct KatoSection {
  std::string field = "scalar";  // scalar | vector_square | vector_divergence
  std::vector<double> rho{1.0, 0.1, 0.01, 0.001};
  std::vector<Point> probes;
  double epsilon = Defaults::kato_epsilon;
};

struct ValidateSection {
  std::vector<std::string> checks;  // empty: every check applicable to the problem
  double s_fraction = Defaults::s_split;
  int cells_per_axis = Defaults::grid_cells;
  std::optional<std::pair<Point, Point>> grid;
  std::optional<Point> boundary_point;
  std::vector<double> deltas{0.5, 0.25, 0.125};
};

struct ExperimentSection {
  std::string kind;  // soft_kill | strong_continuity | potential_convergence | regularity | escape | khasminskii | kato_functional
  double mu = 1.0;
  std::vector<double> n_sequence{10, 100, 1000, 10000};
  std::vector<double> t_sequence;
  std::vector<double> tau_sequence{0.1, 0.01, 0.001};
  std::vector<Point> boundary_points;
  std::vector<double> r_sequence;   // mollifier radii (potential_convergence)
  double big_r = 10.0;
  std::vector<double> h_sequence;   // Landau strengths (potential_convergence)
  double p = 2.0;
  double threshold = 0.0;  // 0 selects the kind's default
  int cells_per_axis = Defaults::grid_cells;
  std::optional<std::pair<Point, Point>> grid;
  double radius = 1.0;  // escape radius
};

struct ExperimentConfig {
  int dimension = 2;
  std::optional<Domain> domain;
  PotentialSpec scalar;
  PotentialSpec vector;
  RunSection run;
  std::string output_dir = "out";
  ApplySection apply;
  TraceSection trace;
  KatoSection kato;
  ValidateSection validate;
  ExperimentSection experiment;
  nlohmann::json echo;  // the parsed file, for the manifest

  /// A, V (with caps) and domain.
  ProblemSpec problem() const;
  SamplingOptions sampling(int workers) const;
};

/// Parses and cross-validates a TOML config. Throws ConfigError.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<string>");

/// Version of the TOML reader, for the manifest.
std::string toml_library_version();

/// Domain from its kind name and parameters; used by the config reader.
Domain make_domain(const std::string& kind, int d, const nlohmann::json& params);

}  // namespace fki
