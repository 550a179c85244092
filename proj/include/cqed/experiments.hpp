#pragma once

// Config-driven experiment runner behind the `cqed` command line.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cqed/types.hpp"

namespace cqed::experiments {

// Experiment names accepted by run().
const std::vector<std::string>& names();

struct GridConfig {
  double half_width = 0.0;
  int points = 0;
};

// Values left unset take the per-experiment defaults listed in docs/config.md.
struct ExperimentConfig {
  std::string experiment;
  std::optional<Complex> alpha;
  std::optional<std::string> state;  // vacuum | fock | coherent | cat | mixture
  std::optional<int> fock_n;
  double psi = 0.0;
  double phi = kPi;
  double eta = 0.0;
  double ramsey_phase = 0.0;
  double kappa = 1.0;
  double n_thermal = 0.0;
  int dim = 0;
  std::optional<GridConfig> grid;
  std::optional<int> angles;
  std::optional<std::int64_t> samples;
  double bin_width = 0.05;
  std::optional<std::int64_t> shots;
  double efficiency = 1.0;
  std::optional<double> t_end;
  std::optional<int> steps;
  std::optional<double> shot_interval;
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";
};

// Parses a JSON document. Unknown keys, wrong types and out-of-range values
// raise ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
// Checks ranges and the experiment name; throws ConfigError.
void validate(const ExperimentConfig& config);
// Canonical JSON of the resolved config (defaults filled in, output directory
// excluded) and its FNV-1a hash.
std::string canonical_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

struct Artifact {
  std::string file;  // relative to the output directory
  std::string checksum;
  std::size_t bytes = 0;
};

struct RunResult {
  int exit_code = 0;
  std::vector<Artifact> artifacts;
  std::vector<std::string> messages;  // human-readable lines for stdout
};

// Runs the experiment, writes its artifacts and manifest.json into config.out.
// Returns exit code 3 when `selfcheck` finds a failing criterion.
RunResult run(const ExperimentConfig& config);

}  // namespace cqed::experiments
