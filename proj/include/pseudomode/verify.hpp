#pragma once

#include <string>
#include <vector>

namespace pm {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<std::string> details;  // measured values, one per line
};

struct SuiteResult {
  std::string suite;
  std::vector<CriterionResult> criteria;
  bool pass() const;
};

inline constexpr int kCriterionCount = 13;

// symbolic, envelopes, rates, mollify, curves, oracle.
const std::vector<std::string>& suite_names();
std::vector<int> suite_criteria(const std::string& suite);  // throws unknown_suite

// Runs acceptance criterion id in [1, kCriterionCount]. Sweeps shared between criteria are cached.
CriterionResult run_criterion(int id);
SuiteResult run_suite(const std::string& suite);

}  // namespace pm
