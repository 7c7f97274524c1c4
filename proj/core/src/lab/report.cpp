#include "kslab/lab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kslab::lab {

bool ExperimentReport::all_passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["name"] = name;
  j["kind"] = kind;
  j["config"] = config_echo;
  j["measured"] = measured;
  j["reference"] = reference;
  nlohmann::json checks_j = nlohmann::json::array();
  for (const auto& c : checks) {
    checks_j.push_back({{"name", c.name},
                        {"pass", c.pass},
                        {"measured", c.measured},
                        {"reference", c.reference},
                        {"tolerance", c.tolerance},
                        {"detail", c.detail}});
  }
  j["checks"] = checks_j;
  j["all_passed"] = all_passed();
  j["wall_clock_seconds"] = wall_clock_seconds;
  j["artifacts"] = artifacts;
  return j;
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_series_csv(const std::string& path, const std::vector<NormSample>& series, double uloc_p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "time,l1,l2,linf,min";
  if (uloc_p > 0.0) out << ",uloc_" << format_real(uloc_p);
  out << "\n";
  for (const auto& s : series) {
    out << format_real(s.t) << ',' << format_real(s.l1) << ',' << format_real(s.l2) << ','
        << format_real(s.linf) << ',' << format_real(s.min);
    if (uloc_p > 0.0) out << ',' << format_real(s.extra);
    out << "\n";
  }
}

void write_report_json(const std::string& path, const ExperimentReport& report) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << report.to_json().dump(2) << "\n";
}

}  // namespace kslab::lab
