#include "fki/output.hpp"

#include <boost/version.hpp>
#include <fmt/format.h>
#include <fstream>

#include "fki/config.hpp"

namespace fki {

namespace {

constexpr const char* kToolVersion = "0.1.0";

void append_point(std::string& line, const std::optional<Point>& p, int d) {
  for (int c = 0; c < d; ++c) {
    line += ',';
    if (p) line += format_double((*p)[c]);
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // fmt ignores the global locale unless asked, so '.' is always the separator.
  return fmt::format("{:.17g}", v);
}

std::string results_csv(const std::vector<ResultRow>& rows, int dimension) {
  std::string out = "run_id,op,t";
  for (int c = 0; c < dimension; ++c) out += fmt::format(",x{}", c + 1);
  for (int c = 0; c < dimension; ++c) out += fmt::format(",y{}", c + 1);
  out += ",re,im,stderr,n_paths,n_steps,cap_hits,seed\n";
  for (const auto& r : rows) {
    std::string line = r.run_id + "," + r.op + "," + format_double(r.t);
    append_point(line, r.x, dimension);
    append_point(line, r.y, dimension);
    const Estimate& e = r.estimate;
    line += fmt::format(",{},{},{},{},{},{},{}\n", format_double(e.mean.real()), format_double(e.mean.imag()),
                        format_double(e.std_error), e.n_paths, e.n_steps, e.cap_hits, e.seed);
    out += line;
  }
  return out;
}

std::string table_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_file(const std::filesystem::path& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + (dir / name).string());
}

nlohmann::json manifest(const nlohmann::json& config_echo, const std::string& subcommand, std::uint64_t seed,
                        int shards) {
  return {{"tool", "fki"},
          {"version", kToolVersion},
          {"subcommand", subcommand},
          {"seed", seed},
          {"shards", shards},
          {"config", config_echo},
          {"libraries",
           {{"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100, FMT_VERSION % 100)},
            {"boost", BOOST_LIB_VERSION},
            {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                          NLOHMANN_JSON_VERSION_PATCH)},
            {"tomlplusplus", toml_library_version()}}}};
}

}  // namespace fki
