#pragma once

#include "netrisk/benson.hpp"
#include "netrisk/io.hpp"
#include "netrisk/scenarios.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace netrisk {

/// One swept parameter: gamma_p, alpha, beta, q_con[a][b] (1-based), n_1 or K.
struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
};

/// Inputs come from files or from a generator; a generator is required for
/// sweeps over q_con, n_1 and K.
struct RunConfig {
  std::optional<std::filesystem::path> network_path;
  std::optional<std::filesystem::path> scenarios_path;
  std::optional<GeneratorConfig> generator;
  int scenario_count = 0;
  std::optional<Grouping> grouping;
  RiskSpec spec;
  std::filesystem::path output_dir = ".";
  std::optional<SweepSpec> sweep;
  bool batch = false;

  /// Throws InvalidConfig.
  void validate() const;
};

/// Relative paths in the JSON are resolved against base_dir.
[[nodiscard]] RunConfig run_config_from_json(const io::json& j, const std::filesystem::path& base_dir);

struct Inputs {
  FinancialNetwork net;
  ScenarioSet scenarios;
  Grouping grouping;
  RiskSpec spec;
};

/// Inputs of one run with the sweep value (if any) applied.
[[nodiscard]] Inputs materialize(const RunConfig& cfg, std::optional<double> sweep_value);

struct SummaryRow {
  std::optional<double> value;
  std::size_t inner_count = 0;
  std::size_t outer_count = 0;
  int z2_count = 0;
  double avg_z2_seconds = 0.0;
  double total_seconds = 0.0;
};

/// Runs the approximation for each sweep value (once without a sweep) and
/// writes run_<i>_corners.csv, run_<i>_metadata.json, run_<i>_polyline.csv
/// (two groups only) and summary.csv into the output directory. At most
/// `jobs` runs execute at the same time.
std::vector<SummaryRow> run(const RunConfig& cfg, int jobs = 1);

[[nodiscard]] std::string summary_csv(const std::vector<SummaryRow>& rows);

}  // namespace netrisk
