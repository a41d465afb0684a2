#pragma once

#include <string>
#include <vector>

namespace poissonk {

// Outcome of one self-check suite run by `poissonk verify`.
struct SuiteResult {
  std::string name;
  std::string scope;  // what was covered, e.g. "k<=5, n<=15"
  bool passed = true;
  std::size_t checks = 0;
  std::vector<std::string> failures;  // "(k, n, lambda): got X, want Y"
};

[[nodiscard]] SuiteResult verify_oracle_equivalence();
[[nodiscard]] SuiteResult verify_recurrence_cross_check();
[[nodiscard]] SuiteResult verify_difference_identities();
[[nodiscard]] SuiteResult verify_closed_form_roots();
[[nodiscard]] SuiteResult verify_lambda2_coefficients();

[[nodiscard]] std::vector<SuiteResult> run_all_suites();

}  // namespace poissonk
