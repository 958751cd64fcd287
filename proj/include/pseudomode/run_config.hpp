#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pseudomode/curves.hpp"

namespace pm {

struct RunConfig {
  std::string potential_name;
  Params potential_params;
  Regime regime = Regime::real_axis;
  ResidualMode mode = ResidualMode::plain;
  int n = 2;
  PathParams path;
  MollifySpec mollify;
  double quad_tol = 1e-10;
  int min_nodes = 2000;
  double grid_refine = 1.0;
  bool oracle = false;
  std::optional<double> oracle_step;
  std::size_t oracle_max_size = 2000000;  // larger probes are skipped and marked floor-limited
  ReportField fit_field = ReportField::ratio;
  std::string output_dir = "out";
  bool termdump = false;
};

// Strict parse of the JSON run-config text: unknown keys, wrong types and out-of-range values
// raise config_invalid.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

struct PointRow {
  ResidualReport report;
  std::optional<double> oracle_ratio;
  std::optional<bool> floor_limited;
  std::optional<double> oracle_gap;
};

struct RunResult {
  std::vector<PointRow> rows;
  RateFit fit;
  std::string fit_abscissa;  // "log|lambda|" or "log(1/h)"
  std::optional<double> ideal_slope, eps_adjusted_slope;
  bool oracle_ok = true;
};

RunResult execute_run(const RunConfig& cfg);

// Writes reports.csv, fit.json and, when requested, termdump.txt into cfg.output_dir.
void write_run_outputs(const RunConfig& cfg, const RunResult& result);

std::string reports_csv(const RunResult& result);
std::string fit_json(const RunConfig& cfg, const RunResult& result);

// Full `run` command: 0 ok, 1 oracle check failed, 2 config error, 3 numerical error.
int run_command(const std::string& config_path, std::ostream& log);

}  // namespace pm
