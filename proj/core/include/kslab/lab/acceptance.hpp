#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kslab/lab/report.hpp"

namespace kslab::lab {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0.0;
  std::vector<CheckResult> checks;
};

// The full verification suite: exact formula checks plus property-based
// measurements at desk scale. Every tolerance is fixed here, in code.
std::vector<CriterionResult> run_acceptance_suite(std::ostream& out, bool quiet = false);

// Prints one pass/fail line per criterion; returns true iff all pass.
bool run_acceptance(std::ostream& out);

}  // namespace kslab::lab
