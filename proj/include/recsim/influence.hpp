#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recsim/learn.hpp"
#include "recsim/types.hpp"

namespace recsim {

// Per-topic influence model. Type-A: repeated exposure suppresses the
// topic's influence level, v = xi beta^{-chi}. Type-B: exposure amplifies
// it, v = xi (1 - beta^{-chi}). "none" keeps v = xi (the beta = 1 Type-A
// case).
enum class InfluenceType { none, type_a, type_b };

struct TopicInfluence {
  InfluenceType type = InfluenceType::none;
  double xi = 0.0;    // intrinsic interest, in [0,1]
  double beta = 1.0;  // influence factor, >= 1
};

struct InfluenceSpec {
  std::vector<TopicInfluence> topics;
  // Lower floor applied to v before normalization; the default 0 keeps the
  // degenerate all-zero case an error instead of fabricating dynamics.
  double v_floor = 0.0;
};

void validate(const ModelSpec& spec, const InfluenceSpec& influence);

// Non-fatal configuration smells (e.g. Type-B with beta = 1, which pins
// v = 0 forever, which is not a no-influence configuration).
std::vector<std::string> influence_warnings(const InfluenceSpec& influence);

double influence_level(const TopicInfluence& topic, std::uint32_t exposures);

// w = v / sum(v); degenerate-influence error when the mass is below 1e-12.
std::vector<double> influence_weights(std::span<const double> v);

// theta <- theta + b (w - theta), renormalized only if the sum drifted
// beyond 1e-12 (the exact-arithmetic path keeps fixed points bit-stable).
InterestProfile theta_step(const InterestProfile& theta, std::span<const double> w, double b_s);

enum class CoupledMode { two_timescale, joint };

struct CoupledRecord {
  std::uint64_t session = 0;
  std::vector<double> x;
  std::vector<double> theta;
  double f = 0.0;
};

struct CoupledTrace {
  std::vector<CoupledRecord> records;
  Strategy final_x;
  InterestProfile final_theta;
  std::uint64_t sessions = 0;
  // Schedules the run used (b equals a in joint mode).
  StepSchedule a = StepSchedule::learning(0.1, 1.0);
  StepSchedule b = StepSchedule::influence(0.5, 0.6);
};

struct CoupledOptions {
  std::size_t sessions = 10'000;
  StepSchedule a = StepSchedule::learning(0.1, 1.0);
  StepSchedule b = StepSchedule::influence(0.5, 0.6);
  std::optional<Strategy> x0;          // default: uniform
  std::optional<InterestProfile> theta0;  // default: uniform
  CoupledMode mode = CoupledMode::two_timescale;
  std::size_t decimate = 1;
  std::uint64_t seed = 1;
  CostSeriesPolicy policy{};
};

// Coupled learner-user run. Each session is sampled under (x(s), theta(s));
// the strategy updates by the same estimator as the static-theta learner
// (the platform does not know it is influencing the user), and theta moves
// toward the normalized influence weights computed from the session's
// exposure counts. In joint mode the stacked iterate uses a(s) for both
// blocks, x projected to D_eps and theta to the simplex.
CoupledTrace run_coupled(const ModelSpec& spec, const InfluenceSpec& influence,
                         const CoupledOptions& options);

std::vector<double> window_mean_x(const CoupledTrace& trace, double trailing_fraction);
std::vector<double> window_mean_theta(const CoupledTrace& trace, double trailing_fraction);
double window_mean_f(const CoupledTrace& trace, double trailing_fraction);

// CSV export: s, x_1..x_M, theta_1..theta_N, F.
std::string to_csv(const CoupledTrace& trace);

}  // namespace recsim
