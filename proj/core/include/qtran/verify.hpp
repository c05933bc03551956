#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qtran {

struct CriterionResult {
  int id = 0;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs acceptance criteria 1-10, printing one PASS/FAIL line each to `log`.
std::vector<CriterionResult> run_acceptance_suite(std::ostream& log);

}  // namespace qtran
