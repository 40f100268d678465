#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/quadrature.hpp"
#include "json.hpp"

namespace nsprofile {

enum class Spacing { Geometric, Linear };

struct TimeGrid {
  double t_min = 16.0;
  double t_max = 16384.0;
  int points = 11;
  Spacing spacing = Spacing::Geometric;

  RealVec values() const;
};

struct Thresholds {
  double slope_tol = 0.1;       // profile-error and density-profile-error
  double rate_tol = 0.05;       // rate
  double sandwich_ratio = 2.0;  // sandwich
  double lemma_ratio = 4.0;     // lemma31
  double r_squared_min = 0.99;  // highfreq
  double oracle_tol = 1e-8;     // oracle-check
};

struct OracleGrid {
  double r_min = 0.05;
  double r_max = 5.0;
  int radii = 10;
  double t_min = 0.1;
  double t_max = 20.0;
  int times = 10;
  double step = 1e-4;
  std::uint64_t seed = 20240601;
};

struct HighFreqGrid {
  double t_max = 24.0;
  int points = 41;
};

struct PlotOptions {
  std::string x_scale = "log";
  std::string y_scale = "log";
  bool has_reference_slope = false;
  double reference_slope = 0.0;
};

struct RunConfig {
  ModelParams params;
  InitialData data;
  TimeGrid grid;
  QuadratureSpec quadrature;
  Thresholds thresholds;
  OracleGrid oracle;
  HighFreqGrid highfreq;
  PlotOptions plot;
  bool svg = true;
  std::string output_dir = ".";

  // Flat JSON object; unknown keys and wrongly typed values raise ConfigError.
  static RunConfig from_json(const nlohmann::json& j);
  // Fully resolved configuration, defaults included.
  nlohmann::json to_json() const;
  // Hash of the resolved configuration without output_dir and threads.
  std::string hash() const;
  void validate() const;
};

RunConfig load_config(const std::string& path);

const std::vector<std::string>& subcommand_names();

struct RunResult {
  bool pass = false;
  nlohmann::json verdict;
  std::vector<std::string> files;
};

// Runs one workflow and writes <subcommand>.csv/.json (and .svg when enabled)
// into config.output_dir. `plot_input` is the CSV read by the plot subcommand.
// Throws UsageError, ConfigError, NumericalError or IoError; for numerical
// failures a diagnostic <subcommand>.json is written before rethrowing.
RunResult run(const std::string& subcommand, const RunConfig& config, const std::string& plot_input = "");

}  // namespace nsprofile
