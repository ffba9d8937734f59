#include "recsim/types.hpp"

#include <cmath>
#include <numeric>

namespace recsim {

namespace {

std::string at_index(const char* what, std::size_t i) {
  return std::string(what) + " at index " + std::to_string(i);
}

}  // namespace

void validate(const ModelSpec& spec) {
  if (spec.sites == 0 || spec.topics == 0)
    throw dimension_error("model requires at least one site and one topic");
  if (spec.publishing.size() != spec.sites * spec.topics)
    throw dimension_error("publishing matrix size does not match M x N");
  if (spec.reward.size() != spec.sites)
    throw dimension_error("reward vector length does not match site count");
  for (std::size_t i = 0; i < spec.publishing.size(); ++i) {
    double v = spec.publishing[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      throw feasibility_error(at_index("publishing entry outside [0,1]", i));
  }
  for (std::size_t m = 0; m < spec.sites; ++m) {
    double v = spec.reward[m];
    if (!std::isfinite(v) || v < 0.0)
      throw feasibility_error(at_index("reward must be finite and non-negative", m));
  }
  for (std::size_t n = 0; n < spec.topics; ++n) {
    double col = 0.0;
    for (std::size_t m = 0; m < spec.sites; ++m) col += spec.p(m, n);
    if (!(col > 0.0))
      throw feasibility_error(at_index("no site covers topic (zero column sum)", n));
  }
  if (!std::isfinite(spec.kappa) || spec.kappa < 0.0 || spec.kappa > 40.0)
    throw feasibility_error("cost exponent kappa must lie in [0, 40]");
  if (!std::isfinite(spec.epsilon) || spec.epsilon < 0.0)
    throw feasibility_error("recommendation floor epsilon must be non-negative");
  if (static_cast<double>(spec.sites) * spec.epsilon > 1.0 + 1e-15)
    throw feasibility_error("infeasible floor: M * epsilon exceeds 1");
}

bool is_simplex(const std::vector<double>& v, double tol) {
  double sum = 0.0;
  for (double a : v) {
    if (!std::isfinite(a) || a < 0.0) return false;
    sum += a;
  }
  return std::abs(sum - 1.0) <= tol;
}

bool is_feasible(const ModelSpec& spec, const Strategy& x) {
  if (x.x.size() != spec.sites) return false;
  double sum = 0.0;
  for (double a : x.x) {
    if (!std::isfinite(a) || a < spec.epsilon) return false;
    sum += a;
  }
  return std::abs(sum - 1.0) <= kSimplexTol;
}

void validate(const ModelSpec& spec, const Strategy& x) {
  if (x.x.size() != spec.sites)
    throw dimension_error("strategy length does not match site count");
  if (!is_feasible(spec, x))
    throw feasibility_error("strategy is not in D_eps (sum != 1 or below floor)");
}

void validate(const ModelSpec& spec, const InterestProfile& theta) {
  if (theta.theta.size() != spec.topics)
    throw dimension_error("interest profile length does not match topic count");
  if (!is_simplex(theta.theta))
    throw feasibility_error("interest profile is not on the simplex");
}

void validate(const CostSeriesPolicy& policy) {
  if (!(policy.tol_abs > 0.0)) throw feasibility_error("series tolerance must be positive");
  if (policy.l_max < 1) throw feasibility_error("series cap must be at least 1");
}

Strategy uniform_strategy(const ModelSpec& spec) {
  return Strategy{std::vector<double>(spec.sites, 1.0 / static_cast<double>(spec.sites))};
}

InterestProfile uniform_profile(const ModelSpec& spec) {
  return InterestProfile{std::vector<double>(spec.topics, 1.0 / static_cast<double>(spec.topics))};
}

}  // namespace recsim
