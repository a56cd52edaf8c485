#pragma once

// Experiment configuration documents and report files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vilenkin/experiments.hpp"
#include "vilenkin/group.hpp"

namespace vilenkin {

/// Schema violation; field() names the offending key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  GroupConfig group = GroupConfig::walsh(8);
  double p = 1.0 / 3.0;
  PhiFunction phi;
  std::string preset;  // "", "thm1a", "sharpness", "rates"
  int rho_cap = 3;
  std::vector<int> levels{4, 6, 8};
  int atom_count = 200;
  std::string rate_preset = "Mn_plus_1";
  SelectionRule selection = SelectionRule::Cap;
  std::optional<double> cap;  // default: 4x the first term
  double lambda_scale = 1.0;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::string output_prefix;
  std::size_t cache_budget = 64;
  bool reference_mode = false;
};

/// Parses a JSON document. Required: "group" ({"radix", "depth"} or
/// {"radices"}) and "seed". Presets "thm1a", "sharpness" and "rates" need
/// 0 < p < 1/2.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Output directory: $VILENKIN_OUTPUT_DIR when set, else cfg.output_dir.
std::filesystem::path output_directory(const ExperimentConfig& cfg);

struct WrittenReport {
  std::filesystem::path csv;
  std::filesystem::path summary;
};

/// Writes <prefix><name>.csv and <prefix><name>_summary.json; the summary
/// echoes the configuration.
WrittenReport write_report(const ExperimentReport& report, const ExperimentConfig& cfg);

}  // namespace vilenkin
