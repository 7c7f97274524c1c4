#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kslab/solver.hpp"

namespace kslab::lab {

enum class ExperimentKind {
  dispersion,
  decay,
  growth,
  delta_sweep,
  picard,
  positivity,
  norms_suite,
  evolve,
};

std::string kind_name(ExperimentKind k);
ExperimentKind kind_from_name(const std::string& name);

struct InitialData {
  enum class Type { gaussian, packet, comb, constant, random_smooth };
  Type type = Type::gaussian;
  double amplitude = 1.0;
  double width = 1.0;        // gaussian / packet / comb bump width
  double center = -1.0;      // < 0 selects the box midpoint
  double k = 0.0;            // packet carrier; <= 0 selects the peak wavenumber
  double period = 4.0;       // comb spacing
  double value = 0.0;        // constant
  double corr_length = 2.0;  // random_smooth spectral envelope scale
};

struct FitWindow {
  double t_min = -1.0;  // < 0: drop the first 20% of the horizon
  double t_max = -1.0;  // < 0: run to the horizon / norm ceiling
  double tolerance = 0.05;
};

struct ProbeSpec {
  double p = inf_p;
  double q = 1.0;
  std::vector<double> times;  // empty: log-spaced count points in [t_min, t_max]
  int count = 25;
  double t_min = 5.0;
  double t_max = 200.0;
};

struct ExperimentConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::evolve;
  int dim = 1;
  std::array<double, 2> extent{0.0, 0.0};
  std::array<int, 2> points{0, 0};
  double A = 0.0;
  InitialData initial;
  SolverConfig solver;
  FitWindow fit;
  ProbeSpec probe;
  std::uint64_t seed = 20200417;
  std::vector<double> delta_list;
  double target_amplitude = 0.0;
  int picard_max_iter = 8;
  int picard_substeps = 64;
  double uloc_p = 0.0;  // > 0 adds a uloc_p column to the series CSV
  int suite_fields_1d = 150;
  int suite_fields_2d = 50;

  Grid grid() const;
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::vector<std::string>& issues);
  std::vector<std::string> issues;
};

ExperimentConfig default_config(ExperimentKind kind);

// Overlays a JSON document onto the defaults for its kind; unknown keys are
// rejected so typos do not silently fall back to defaults.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

// Throws ConfigError listing every violated precondition.
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace kslab::lab
