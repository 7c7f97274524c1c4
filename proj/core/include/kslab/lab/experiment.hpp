#pragma once

#include <string>

#include "kslab/lab/config.hpp"
#include "kslab/lab/report.hpp"

namespace kslab::lab {

// Runs the experiment described by cfg. Deterministic given config + seed.
// When out_dir is non-empty the run writes report.json plus its CSV artifacts
// there (the directory is created); with an empty out_dir nothing touches the
// filesystem. quiet suppresses progress lines on stdout.
ExperimentReport run(const ExperimentConfig& cfg, const std::string& out_dir = "",
                     bool quiet = true);

// Builds the configured initial field (deterministic via cfg.seed).
RealField build_initial(const ExperimentConfig& cfg);

}  // namespace kslab::lab
