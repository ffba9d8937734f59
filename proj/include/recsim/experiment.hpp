#pragma once

#include <filesystem>
#include <string>

#include "recsim/config.hpp"

namespace recsim {

struct ExperimentResult {
  std::filesystem::path out_dir;
  std::string summary_json;  // also written to out_dir/summary.json
  std::string report;        // also written to out_dir/report.txt
};

// Runs the configured experiment and writes its artifacts:
//   learn/coupled  per-seed CSV traces + summary + report
//   static         solver report with a grid-oracle gap + summary + report
//   oracle         grid search result + summary + report
//   check          invariant battery (gradient FD, convexity, projection
//                  oracle, estimator unbiasedness, session statistics)
// Deterministic given the config (including seeds), independent of `jobs`.
// The RECSIM_OUT environment variable overrides config.out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace recsim
