#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "recsim/types.hpp"

namespace recsim {

// Euclidean projection onto D_eps = {x : sum x = 1, x_m >= eps}.
// Water-filling form x_m = max(y_m - tau, eps) with tau found by
// sort-and-threshold on the shifted problem. Exactly idempotent:
// projecting an output again returns it bit-identically.
Strategy project_eps_simplex(std::span<const double> y, double eps);

struct StartResult {
  std::vector<double> x;
  double f = 0.0;
  std::size_t iterations = 0;
  bool converged = false;  // projected-stationarity measure below tol
};

struct SolveReport {
  Strategy best_x;
  double best_f = 0.0;
  std::size_t starts = 0;
  std::vector<StartResult> start_results;     // ordered by start index
  std::vector<std::size_t> near_best;         // starts with f within 0.1 of best
  std::optional<double> grid_gap;             // best_f - oracle f, when computed
};

struct SolveOptions {
  std::size_t starts = 8;        // random starts in addition to the uniform point
  double step0 = 0.05;           // diminishing phase: a_t = step0 / (1 + t)
  std::size_t max_iters = 50'000;
  double tol = 1e-8;             // on the stationarity measure below
  std::uint64_t seed = 1;
  std::size_t jobs = 1;          // starts may run in parallel
};

// Multistart projected gradient ascent for max F over D_eps. Each start runs
// the diminishing-step schedule, then a monotone backtracking polish; a run
// counts as converged when ||P(x + 1e-4 grad F) - x||_inf < tol. (P1) is
// nonconvex, so only stationarity is guaranteed; multistart mitigates local
// optima and near-ties are reported.
SolveReport solve_static(const ModelSpec& spec, const InterestProfile& theta,
                         const CostSeriesPolicy& policy = {}, const SolveOptions& options = {});

// ||P(x + a_ref grad F(x)) - x||_inf, the convergence measure used above.
double stationarity_gap(const ModelSpec& spec, const InterestProfile& theta,
                        std::span<const double> x, const CostSeriesPolicy& policy = {},
                        double a_ref = 1e-4);

struct GridResult {
  Strategy x;
  double f = 0.0;
  std::size_t points = 0;
};

struct GridOptions {
  std::size_t max_points = 10'000'000;
  // Optional per-coordinate box (intersected with D_eps) for local refinement.
  std::vector<double> lower;
  std::vector<double> upper;
};

// Exhaustive evaluation of F on the lattice {x in D_eps : x_m in eps + k res}.
// Requires (1 - M eps) to be a multiple of res (else no lattice point sums
// to one); throws when the lattice exceeds max_points.
GridResult grid_oracle(const ModelSpec& spec, const InterestProfile& theta,
                       const CostSeriesPolicy& policy, double resolution,
                       const GridOptions& options = {});

// Coarse pass at `coarse` then a local box pass at `fine` around the coarse
// maximizer (box half-width = coarse).
GridResult grid_refine(const ModelSpec& spec, const InterestProfile& theta,
                       const CostSeriesPolicy& policy, double coarse, double fine,
                       std::size_t max_points = 10'000'000);

}  // namespace recsim
