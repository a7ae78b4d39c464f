#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fki/estimators.hpp"

namespace fki {

/// One estimator row: run_id, op, t, x..., y..., re, im, stderr, n_paths, n_steps, cap_hits, seed.
struct ResultRow {
  std::string run_id;
  std::string op;
  double t = 0.0;
  std::optional<Point> x;
  std::optional<Point> y;
  Estimate estimate;
};

/// Floats use 17 significant digits and '.' as decimal separator regardless of locale.
std::string format_double(double v);

std::string results_csv(const std::vector<ResultRow>& rows, int dimension);

/// Generic table: header line plus rows of preformatted cells.
std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

std::string json_text(const nlohmann::json& j);

/// Writes `content` to dir/name, creating dir if needed.
void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content);

/// Config echo plus tool and library versions.
nlohmann::json manifest(const nlohmann::json& config_echo, const std::string& subcommand, std::uint64_t seed,
                        int shards);

}  // namespace fki
