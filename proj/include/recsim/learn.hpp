#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recsim/rng.hpp"
#include "recsim/simulate.hpp"
#include "recsim/types.hpp"

namespace recsim {

// Step-size family a(s) = a0 / (1 + s^p), sessions indexed from 1.
// The learning family enforces p in (0.5, 1] so that sum a = inf and
// sum a^2 < inf; the influence family allows any p > 0 (including exponents
// above 1, which make the total influence finite) and checks b(1) <= 1 so the
// interest update stays a convex combination.
class StepSchedule {
 public:
  static StepSchedule learning(double a0, double p);
  static StepSchedule influence(double b0, double p);

  double operator()(std::uint64_t session) const {
    return scale_ / (1.0 + std::pow(static_cast<double>(session), exponent_));
  }
  double scale() const { return scale_; }
  double exponent() const { return exponent_; }

 private:
  StepSchedule(double scale, double exponent) : scale_(scale), exponent_(exponent) {}
  double scale_;
  double exponent_;
};

// Single-session stochastic gradient estimate: zero except at the accepted
// site m(s), where g = (r_m - conditional mean reward + T dc_{T+1}) / x_m.
// Unbiased for grad F at the strategy that generated the outcome.
std::vector<double> gradient_estimate(const ModelSpec& spec, const Strategy& x,
                                      const SessionOutcome& outcome);

// x <- P_{D_eps}(x + a_s G)
Strategy learner_step(const ModelSpec& spec, const Strategy& x, std::span<const double> g,
                      double a_s);

struct LearnRecord {
  std::uint64_t session = 0;
  std::vector<double> x;        // strategy after the session's update
  double f = 0.0;               // F(x) under the run's theta
  std::optional<double> err;    // ||x - x_ref||_2 when a reference is given
  std::size_t site = 0;
  std::size_t topic = 0;
  std::uint64_t trials = 0;
};

struct LearnTrace {
  std::vector<LearnRecord> records;
  Strategy final_x;
  std::uint64_t sessions = 0;
};

struct LearnOptions {
  std::size_t sessions = 10'000;
  StepSchedule schedule = StepSchedule::learning(0.01, 2.0 / 3.0);
  std::optional<Strategy> x0;          // nullopt: random uniform[0,1]^M, normalized, projected
  std::optional<Strategy> x_ref;       // reference for the error column
  std::size_t decimate = 1;            // record every k-th session (last always kept)
  std::uint64_t seed = 1;
  CostSeriesPolicy policy{};
};

// Full online learning run: sample_session -> gradient_estimate ->
// learner_step per session, with trace recording. The learner sees P and r
// but never theta; theta only parameterizes the session draws and the
// reported F values.
LearnTrace run_learning(const ModelSpec& spec, const InterestProfile& theta,
                        const LearnOptions& options);

// Mean strategy over the trailing fraction of recorded sessions.
std::vector<double> window_mean_x(const LearnTrace& trace, double trailing_fraction);

// CSV export: s, x_1..x_M, F, err (err empty without a reference).
std::string to_csv(const LearnTrace& trace);

}  // namespace recsim
