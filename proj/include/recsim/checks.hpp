#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "recsim/types.hpp"

namespace recsim::checks {

// Independent verification oracles. None of these call the analytic
// gradient or the sort-and-threshold projection internally; they recompute
// expectations from definitions (finite differences, subset enumeration,
// Monte Carlo) so they can sit on the other side of a dual-route check.

// Central finite differences of reward/cost/net at `points` seeded feasible
// strategies; returns the largest max-norm relative error against the
// analytic gradients.
double fd_gradient_max_rel_err(const ModelSpec& spec, const InterestProfile& theta,
                               const CostSeriesPolicy& policy, std::size_t points,
                               std::uint64_t seed, double step = 1e-6);

// Midpoint convexity probes of C on D_eps; counts violations beyond slack.
std::size_t convexity_violations(const ModelSpec& spec, const InterestProfile& theta,
                                 const CostSeriesPolicy& policy, std::size_t trials,
                                 double slack, std::uint64_t seed);

// Exact projection onto D_eps by brute-force active-set enumeration
// (feasible candidates over all 2^M - 1 free sets, minimum distance wins).
Strategy brute_force_projection(std::span<const double> y, double eps);

// Largest L2 gap between project_eps_simplex and the brute-force oracle
// over seeded random inputs.
double projection_vs_oracle_max_err(std::size_t dim, double eps, std::size_t points,
                                    std::uint64_t seed);

struct BiasReport {
  std::vector<double> mc_mean;
  std::vector<double> std_error;
  std::vector<double> analytic;
  double max_z = 0.0;  // max_m |mean_m - grad_m| / se_m
};

// Monte-Carlo mean of the session gradient estimator at fixed x versus the
// analytic grad F.
BiasReport estimator_bias(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta,
                          const CostSeriesPolicy& policy, std::size_t sessions,
                          std::uint64_t seed);

struct SessionStatsReport {
  double max_trials_z = 0.0;  // empirical E[T | n] vs 1 / rho_n
  double max_site_z = 0.0;    // accepted-site law vs x_m p(m,n) / rho_n
  double max_topic_z = 0.0;   // interest-topic marginal vs theta
};

SessionStatsReport session_statistics(const ModelSpec& spec, const Strategy& x,
                                      const InterestProfile& theta, std::size_t sessions,
                                      std::uint64_t seed);

// Seeded feasible point (uniform Dirichlet projected to D_eps).
Strategy random_feasible(const ModelSpec& spec, std::uint64_t seed, std::uint64_t stream);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
};

// The battery behind the CLI `check` mode.
std::vector<CheckResult> run_battery(const ModelSpec& spec, const InterestProfile& theta,
                                     const CostSeriesPolicy& policy, std::uint64_t seed);

}  // namespace recsim::checks
