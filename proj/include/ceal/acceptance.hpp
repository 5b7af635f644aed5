#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace ceal {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double limit_seconds = 0.0;  // 0: no limit
};

struct AcceptanceOptions {
  std::set<int> only;  // empty: all criteria
  std::uint64_t seed = 1;
  std::ostream* log = nullptr;  // PASS/FAIL lines as each criterion finishes
};

// Runs the acceptance criteria at their stated sizes and tolerances. A
// criterion that exceeds its time limit fails even if its checks pass.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

std::string format_result(const CriterionResult& result);

}  // namespace ceal
