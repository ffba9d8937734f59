#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "recsim/influence.hpp"
#include "recsim/types.hpp"

namespace recsim {

enum class ExperimentMode { static_solve, learn, coupled, oracle, check };

// Everything an experiment run needs, parsed from a flat key = value config
// (with a row-per-line block for P) or expanded from a named preset.
struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::static_solve;
  ModelSpec model;
  std::optional<InterestProfile> theta;    // static / learn / oracle / check
  std::optional<InfluenceSpec> influence;  // coupled

  double a0 = 0.01;
  double a_exp = 2.0 / 3.0;
  double b0 = 0.5;
  double b_exp = 0.6;

  // Paired-schedule comparison (fig. 3): run each seed under (a,b) and
  // (a2,b2) and report both steady states.
  bool compare_timescales = false;
  double a2_0 = 0.1;
  double a2_exp = 0.6;
  double b2_0 = 0.5;
  double b2_exp = 1.0;

  std::size_t sessions = 10'000;
  std::vector<std::uint64_t> seeds = {1};
  std::optional<Strategy> x0;  // unset with x0_random => uniform
  bool x0_random = false;
  std::optional<InterestProfile> theta0;
  std::optional<Strategy> x_ref;
  std::size_t decimate = 1;

  std::size_t starts = 8;
  std::size_t max_iters = 50'000;
  double tol = 1e-8;
  double resolution = 0.05;       // grid oracle coarse step (static/oracle)
  double fine_resolution = 0.01;  // 0 disables refinement
  CoupledMode coupled_mode = CoupledMode::two_timescale;
  double v_floor = 0.0;

  std::string out_dir = "out";
  std::size_t jobs = 1;
  CostSeriesPolicy policy{};
  std::string preset;  // set when expanded from a named preset
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::vector<std::string> errors;  // all validation problems, not just the first
};

ParseResult parse_config(const std::string& text);

// Canonical text form; parse(render(c)) reproduces c exactly.
std::string render_config(const ExperimentConfig& config);

const char* to_string(ExperimentMode mode);

}  // namespace recsim
