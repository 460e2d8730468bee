#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace pdrwm::experiment {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

inline constexpr int kCriterionCount = 10;

/// Runs acceptance criterion `id` (1-based) with the given seed. A criterion
/// also fails when it exceeds its runtime budget.
CriterionResult run_criterion(int id, std::uint64_t seed);

/// "PASS [n] title: detail (t s / budget s)"
std::string format_result(const CriterionResult& result);

/// Runs every criterion, printing one line each; returns all results.
std::vector<CriterionResult> verify_all(std::uint64_t seed, std::ostream& out);

}  // namespace pdrwm::experiment
