#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "kslab/norms.hpp"

namespace kslab::lab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ExperimentReport {
  int schema_version = 1;
  std::string name;
  std::string kind;
  nlohmann::json config_echo;
  nlohmann::json measured;   // fitted rates, empirical constants, ...
  nlohmann::json reference;  // recomputed from formulas at run time, never hard-coded
  std::vector<CheckResult> checks;
  double wall_clock_seconds = 0.0;
  std::map<std::string, std::string> artifacts;

  bool all_passed() const;
  nlohmann::json to_json() const;
};

// 17 significant digits, locale-independent.
std::string format_real(double x);

// Fixed columns: time, l1, l2, linf, min, then uloc_p when requested. Times
// ascend; one header row; UTF-8, comma separated.
void write_series_csv(const std::string& path, const std::vector<NormSample>& series,
                      double uloc_p = 0.0);

void write_report_json(const std::string& path, const ExperimentReport& report);

}  // namespace kslab::lab
