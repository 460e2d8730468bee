#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pdrwm/errors.hpp"
#include "pdrwm/experiment/config.hpp"
#include "pdrwm/experiment/criteria.hpp"
#include "pdrwm/experiment/scenarios.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCriterionFailure = 1;
constexpr int kConfigError = 2;

int run_config(const std::string& path) {
  pdrwm::experiment::ExperimentConfig config;
  try {
    config = pdrwm::experiment::load_config(path);
  } catch (const pdrwm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  const auto outcome = pdrwm::experiment::run_scenario(config, std::cout);
  for (const auto& file : outcome.files) std::cout << "wrote " << file.string() << '\n';
  return outcome.ok ? kOk : kCriterionFailure;
}

int verify(std::uint64_t seed, int only) {
  using namespace pdrwm::experiment;
  bool all = true;
  if (only > 0) {
    const CriterionResult r = run_criterion(only, seed);
    std::cout << format_result(r) << std::endl;
    return r.passed ? kOk : kCriterionFailure;
  }
  for (const auto& r : verify_all(seed, std::cout)) all = all && r.passed;
  return all ? kOk : kCriterionFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Position-dependent random walk Metropolis experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the scenario described by a YAML config");
  run->add_option("config", config_path, "Config file")->required();

  std::uint64_t seed = 1;
  int criterion = 0;
  auto* verify_cmd = app.add_subcommand("verify-all", "Run the acceptance criteria");
  verify_cmd->add_option("--seed", seed, "Base seed");
  verify_cmd->add_option("--criterion", criterion, "Run a single criterion (1-10)")
      ->check(CLI::Range(1, pdrwm::experiment::kCriterionCount));

  auto* list = app.add_subcommand("list-scenarios", "List the scenario names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return run_config(config_path);
    if (*verify_cmd) return verify(seed, criterion);
    if (*list) {
      for (auto s : pdrwm::experiment::all_scenarios())
        std::cout << pdrwm::experiment::to_string(s) << "  " << pdrwm::experiment::summary(s) << '\n';
      return kOk;
    }
  } catch (const pdrwm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCriterionFailure;
  }
  return kOk;
}
