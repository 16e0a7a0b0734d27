#pragma once

#include <string>
#include <vector>

// The verification suite behind `nts verify` and the acceptance test binary.
// Every criterion pins its own parameters, trial counts and tolerances and
// reports one pass/fail line with the measured constants.

namespace nts {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
};

std::vector<std::string> criterion_ids();
CriterionResult run_criterion(const std::string& id, int threads = 0);
std::vector<CriterionResult> run_all_criteria(int threads = 0);

}  // namespace nts
