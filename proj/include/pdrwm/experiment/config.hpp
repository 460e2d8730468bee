#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pdrwm/covariance_fields.hpp"
#include "pdrwm/diagnostics.hpp"
#include "pdrwm/target_densities.hpp"

namespace pdrwm::experiment {

enum class Scenario {
  Figure1,
  Figure2Data,
  Figure3Data,
  Table1Grid,
  Lemma2Drift,
  Lemma3Drift,
  Lemma4Probe,
  Lemma6Exact,
  Lemma7Sweep,
  EsjdScan,
  OracleScan,
  Custom,
};

const std::vector<Scenario>& all_scenarios();
std::string to_string(Scenario scenario);
/// Throws ConfigError for an unknown name.
Scenario parse_scenario(const std::string& name);
/// One-line description for list-scenarios.
std::string summary(Scenario scenario);

/// family: exponential (a) | subexponential (a, beta) | polynomial (p) |
/// normal | ridge | rectangle
struct TargetSpec {
  std::string family = "exponential";
  double a = 1.0;
  double beta = 0.5;
  double p = 2.0;

  TargetDensity build() const;
  std::string describe() const;
};

/// family: constant (sigma) | power (b) | quadratic (offset) |
/// tempered_langevin (cap)
struct FieldSpec {
  std::string family = "constant";
  double sigma = 1.0;
  double b = 0.0;
  double offset = 1.0;
  double cap = 1e12;

  CovarianceField build(const TargetDensity& target) const;
  std::string describe() const;
};

/// kind: exp_abs (s) | exp_abs_pow (s, beta) | abs_pow (s) | rectangle
struct LyapunovSpec {
  std::string kind = "exp_abs";
  double s = 0.5;
  double beta = 0.5;

  LyapunovFunction build() const;
};

struct ExperimentConfig {
  Scenario scenario = Scenario::Custom;
  TargetSpec target;
  FieldSpec field;
  LyapunovSpec lyapunov;
  std::optional<double> h;
  std::vector<double> h_values;
  std::uint64_t seed = 1;
  std::vector<double> grid;
  std::vector<double> start;
  std::optional<std::size_t> n_samples;
  std::optional<std::size_t> n_steps;
  double epsilon = 0.1;
  std::vector<double> L_values;
  std::optional<double> delta;
  std::vector<double> b_values;
  std::filesystem::path output_dir = "out";
  /// Digest of the canonical re-serialisation of the parsed config.
  std::string digest;
};

/// Environment variable that overrides output_dir.
inline constexpr const char* kOutputDirEnv = "PDRWM_OUTPUT_DIR";

/// Parses YAML text. Unknown keys, wrong types and invalid values throw
/// ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// output_dir, or the environment override when set.
std::filesystem::path resolve_output_dir(const ExperimentConfig& config);

}  // namespace pdrwm::experiment
