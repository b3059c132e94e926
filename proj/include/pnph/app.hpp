#ifndef PNPH_APP_HPP
#define PNPH_APP_HPP

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "pnph/geometry.hpp"

namespace pnph {

/// Resolved run configuration; see README for the JSON schema.
struct RunConfig {
  nlohmann::json raw;

  std::optional<std::string> preset;
  std::map<std::string, double> preset_params;
  std::optional<std::string> raster_path;
  double sigma = 0.0;
  double epsilon = 0.1;
  double alpha = 0.0;

  double tol = 1e-11;

  std::string model;
  nlohmann::json run;

  std::string out_dir = "out";
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_json(const nlohmann::json& j);
void validate_config(const RunConfig& cfg);

ReferenceCell build_geometry(const RunConfig& cfg);

/// Executes the configured model and writes the artifact files under
/// cfg.out_dir (tensors.json, series.csv, manifest.json, compare.json, ...).
void run_config(const RunConfig& cfg);

/// CLI entry: returns the process exit code (0 ok, 2 config error,
/// 3 solver failure, 4 physical-regime error).
int cli_main(int argc, char** argv);

inline constexpr const char* kToolVersion = "pnph 0.1.0";

} // namespace pnph

#endif
