// Acceptance harness: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pdrwm/experiment/criteria.hpp"

int main(int argc, char** argv) {
  using namespace pdrwm::experiment;
  CLI::App app{"pdrwm acceptance criteria"};
  std::uint64_t seed = 1;
  int criterion = 0;
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--criterion", criterion, "Single criterion (1-10); all when omitted")
      ->check(CLI::Range(1, kCriterionCount));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  if (criterion > 0) {
    const CriterionResult r = run_criterion(criterion, seed);
    std::cout << format_result(r) << std::endl;
    all = r.passed;
  } else {
    for (const auto& r : verify_all(seed, std::cout)) all = all && r.passed;
  }
  return all ? 0 : 1;
}
