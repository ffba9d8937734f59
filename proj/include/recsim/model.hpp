#pragma once

#include <span>
#include <vector>

#include "recsim/types.hpp"

namespace recsim {

// Deterministic evaluation of the session model: acceptance probabilities,
// expected reward R, expected cost C (truncated series), net revenue
// F = R - C, and their analytic gradients in x.
//
// The *_at functions evaluate the analytic formulas at a raw coordinate
// vector without requiring simplex membership (the formulas extend smoothly
// off the simplex). They are what finite-difference checks perturb. The
// Strategy/InterestProfile overloads validate feasibility first and then
// delegate.

std::vector<double> acceptance_probs_at(const ModelSpec& spec, std::span<const double> x);
double reward_at(const ModelSpec& spec, std::span<const double> x, std::span<const double> theta);
double cost_at(const ModelSpec& spec, std::span<const double> x, std::span<const double> theta,
               const CostSeriesPolicy& policy = {});
double net_at(const ModelSpec& spec, std::span<const double> x, std::span<const double> theta,
              const CostSeriesPolicy& policy = {});
std::vector<double> grad_reward_at(const ModelSpec& spec, std::span<const double> x,
                                   std::span<const double> theta);
std::vector<double> grad_cost_at(const ModelSpec& spec, std::span<const double> x,
                                 std::span<const double> theta, const CostSeriesPolicy& policy = {});
std::vector<double> grad_net_at(const ModelSpec& spec, std::span<const double> x,
                                std::span<const double> theta, const CostSeriesPolicy& policy = {});

// rho_n = sum_m x_m p(m,n)
std::vector<double> acceptance_probs(const ModelSpec& spec, const Strategy& x);

// R = sum_n theta_n (sum_m r_m x_m p(m,n)) / rho_n
double expected_reward(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta);

// C = sum_n theta_n sum_{l>=1} dc_l (1-rho_n)^{l-1}, dc_l = l^k - (l-1)^k
double expected_cost(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta,
                     const CostSeriesPolicy& policy = {});

double net_revenue(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta,
                   const CostSeriesPolicy& policy = {});

std::vector<double> grad_reward(const ModelSpec& spec, const Strategy& x,
                                const InterestProfile& theta);
std::vector<double> grad_cost(const ModelSpec& spec, const Strategy& x,
                              const InterestProfile& theta, const CostSeriesPolicy& policy = {});
std::vector<double> grad_net(const ModelSpec& spec, const Strategy& x,
                             const InterestProfile& theta, const CostSeriesPolicy& policy = {});

namespace detail {

// sum_{l>=1} dc_l q^{l-1} with q = 1-rho. Stops once the current term is
// below tol AND the term envelope has entered geometric decay; throws
// series_error if the cap is reached first.
double cost_series(double rho, double kappa, const CostSeriesPolicy& policy);

// sum_{l>=1} l dc_{l+1} q^{l-1}, same truncation regime.
double cost_gradient_series(double rho, double kappa, const CostSeriesPolicy& policy);

// dc_l = l^kappa - (l-1)^kappa (dc_1 = 1 for kappa = 0 per c_0 = 0)
double delta_cost(double l, double kappa);

}  // namespace detail

}  // namespace recsim
