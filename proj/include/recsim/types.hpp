#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace recsim {

// Error hierarchy. Everything the library throws derives from recsim::error,
// so callers can separate domain failures from I/O or config problems.
class error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class dimension_error : public error {
  using error::error;
};

// Input violates a feasibility invariant (simplex membership, M*eps > 1, ...).
class feasibility_error : public error {
  using error::error;
};

// Cost series hit its term cap before entering the decay regime.
class series_error : public error {
  using error::error;
};

// Degenerate model state: acceptance probability below the floor, all-zero
// influence vector, runaway session.
class degenerate_error : public error {
  using error::error;
};

// Static description of the world: M websites, N topics, coverage
// probabilities, per-click-through revenues, cost exponent and the
// per-site recommendation floor.
struct ModelSpec {
  std::size_t sites = 0;             // M
  std::size_t topics = 0;            // N
  std::vector<double> publishing;    // row-major M x N, p(m,n) in [0,1]
  std::vector<double> reward;        // length M, r_m >= 0
  double kappa = 0.0;                // session cost is T^kappa
  double epsilon = 0.0;              // floor: x_m >= epsilon, M*epsilon <= 1

  double p(std::size_t m, std::size_t n) const { return publishing[m * topics + n]; }
};

// Randomized recommendation distribution over sites (a point of D_eps).
struct Strategy {
  std::vector<double> x;
};

// User interest distribution over topics (a point of the N-simplex).
struct InterestProfile {
  std::vector<double> theta;
};

// Truncation policy for the infinite cost series.
struct CostSeriesPolicy {
  double tol_abs = 1e-10;
  std::size_t l_max = 1'000'000;
};

inline constexpr double kSimplexTol = 1e-9;   // |sum - 1| tolerance for inputs
inline constexpr double kRhoMin = 1e-8;       // evaluation refuses rho below this

// Throw feasibility/dimension errors on invalid inputs; no-ops otherwise.
void validate(const ModelSpec& spec);
void validate(const ModelSpec& spec, const Strategy& x);
void validate(const ModelSpec& spec, const InterestProfile& theta);
void validate(const CostSeriesPolicy& policy);

bool is_feasible(const ModelSpec& spec, const Strategy& x);
bool is_simplex(const std::vector<double>& v, double tol = kSimplexTol);

Strategy uniform_strategy(const ModelSpec& spec);
InterestProfile uniform_profile(const ModelSpec& spec);

}  // namespace recsim
