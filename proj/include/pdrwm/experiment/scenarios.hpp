#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "pdrwm/experiment/config.hpp"

namespace pdrwm::experiment {

struct ScenarioOutcome {
  /// False when any summary line is a FAIL.
  bool ok = true;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> lines;
};

/// Runs one scenario, writing its CSVs under resolve_output_dir(config) and
/// one "PASS|FAIL|INFO <text>" line per check to `log`.
ScenarioOutcome run_scenario(const ExperimentConfig& config, std::ostream& log);

}  // namespace pdrwm::experiment
