#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "homog/parallel.hpp"

namespace homog {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;    // one line, printed next to the verdict
  nlohmann::json data;   // measured values
  double seconds = 0.0;  // wall time; kept out of the JSON report
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 1;
};

inline constexpr int kAcceptanceCriteria = 9;

/// Runs criterion 1..8. Criterion 9 compares two whole reports and lives
/// with the callers that can run the suite twice.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts, const Executor& exec);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, const Executor& exec);

/// Deterministic report: ids, names, verdicts, details, data. No timings.
nlohmann::json acceptance_report(const std::vector<CriterionResult>& results, const AcceptanceOptions& opts);

/// "[PASS] 3 name: detail (1.23 s)"
std::string format_line(const CriterionResult& r);

}  // namespace homog
