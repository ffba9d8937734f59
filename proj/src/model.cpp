#include "recsim/model.hpp"

#include <cmath>
#include <string>

namespace recsim {

namespace detail {

double delta_cost(double l, double kappa) {
  if (l <= 1.0) return 1.0;  // c_1 = 1 for every kappa, c_0 = 0
  return std::pow(l, kappa) - std::pow(l - 1.0, kappa);
}

namespace {

// Terms dc_l q^{l-1} (and l dc_{l+1} q^{l-1}) first grow through a
// polynomial mode, then decay geometrically. A bare "term < tol" stop can
// trigger before the mode for small rho, so we additionally require the
// envelope ratio q ((l+1)/l)^{kappa+1} to have dropped below 1.
template <typename TermFn>
double truncated_series(double rho, double kappa, const CostSeriesPolicy& policy, TermFn term_at) {
  const double q = 1.0 - rho;
  double qpow = 1.0;  // q^{l-1}
  double sum = 0.0;
  for (std::size_t l = 1; l <= policy.l_max; ++l) {
    const double dl = static_cast<double>(l);
    const double term = term_at(dl) * qpow;
    sum += term;
    const bool decaying = q * std::pow((dl + 1.0) / dl, kappa + 1.0) < 1.0;
    if (decaying && term < policy.tol_abs) return sum;
    qpow *= q;
  }
  throw series_error("cost series cap " + std::to_string(policy.l_max) +
                     " reached before truncation regime (rho = " + std::to_string(rho) +
                     " too small for policy)");
}

}  // namespace

double cost_series(double rho, double kappa, const CostSeriesPolicy& policy) {
  return truncated_series(rho, kappa, policy,
                          [kappa](double l) { return delta_cost(l, kappa); });
}

double cost_gradient_series(double rho, double kappa, const CostSeriesPolicy& policy) {
  return truncated_series(rho, kappa, policy,
                          [kappa](double l) { return l * delta_cost(l + 1.0, kappa); });
}

}  // namespace detail

namespace {

void check_dims(const ModelSpec& spec, std::span<const double> x, std::span<const double> theta) {
  if (x.size() != spec.sites)
    throw dimension_error("x length does not match site count");
  if (theta.size() != spec.topics)
    throw dimension_error("theta length does not match topic count");
}

std::vector<double> rho_guarded(const ModelSpec& spec, std::span<const double> x) {
  std::vector<double> rho(spec.topics, 0.0);
  for (std::size_t m = 0; m < spec.sites; ++m)
    for (std::size_t n = 0; n < spec.topics; ++n) rho[n] += x[m] * spec.p(m, n);
  for (std::size_t n = 0; n < spec.topics; ++n)
    if (!(rho[n] >= kRhoMin))
      throw degenerate_error("acceptance probability for topic " + std::to_string(n) +
                             " is below " + std::to_string(kRhoMin));
  return rho;
}

// sum_m r_m x_m p(m,n) per topic
std::vector<double> reward_numerators(const ModelSpec& spec, std::span<const double> x) {
  std::vector<double> num(spec.topics, 0.0);
  for (std::size_t m = 0; m < spec.sites; ++m) {
    const double rx = spec.reward[m] * x[m];
    for (std::size_t n = 0; n < spec.topics; ++n) num[n] += rx * spec.p(m, n);
  }
  return num;
}

}  // namespace

std::vector<double> acceptance_probs_at(const ModelSpec& spec, std::span<const double> x) {
  if (x.size() != spec.sites)
    throw dimension_error("x length does not match site count");
  std::vector<double> rho(spec.topics, 0.0);
  for (std::size_t m = 0; m < spec.sites; ++m)
    for (std::size_t n = 0; n < spec.topics; ++n) rho[n] += x[m] * spec.p(m, n);
  return rho;
}

double reward_at(const ModelSpec& spec, std::span<const double> x, std::span<const double> theta) {
  check_dims(spec, x, theta);
  const auto rho = rho_guarded(spec, x);
  const auto num = reward_numerators(spec, x);
  double r = 0.0;
  for (std::size_t n = 0; n < spec.topics; ++n) r += theta[n] * num[n] / rho[n];
  return r;
}

double cost_at(const ModelSpec& spec, std::span<const double> x, std::span<const double> theta,
               const CostSeriesPolicy& policy) {
  check_dims(spec, x, theta);
  validate(policy);
  const auto rho = rho_guarded(spec, x);
  double c = 0.0;
  for (std::size_t n = 0; n < spec.topics; ++n)
    c += theta[n] * detail::cost_series(rho[n], spec.kappa, policy);
  return c;
}

double net_at(const ModelSpec& spec, std::span<const double> x, std::span<const double> theta,
              const CostSeriesPolicy& policy) {
  return reward_at(spec, x, theta) - cost_at(spec, x, theta, policy);
}

std::vector<double> grad_reward_at(const ModelSpec& spec, std::span<const double> x,
                                   std::span<const double> theta) {
  check_dims(spec, x, theta);
  const auto rho = rho_guarded(spec, x);
  const auto num = reward_numerators(spec, x);
  std::vector<double> g(spec.sites, 0.0);
  for (std::size_t m = 0; m < spec.sites; ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < spec.topics; ++n)
      acc += theta[n] * spec.p(m, n) / rho[n] * (spec.reward[m] - num[n] / rho[n]);
    g[m] = acc;
  }
  return g;
}

std::vector<double> grad_cost_at(const ModelSpec& spec, std::span<const double> x,
                                 std::span<const double> theta, const CostSeriesPolicy& policy) {
  check_dims(spec, x, theta);
  validate(policy);
  const auto rho = rho_guarded(spec, x);
  std::vector<double> series(spec.topics);
  for (std::size_t n = 0; n < spec.topics; ++n)
    series[n] = detail::cost_gradient_series(rho[n], spec.kappa, policy);
  std::vector<double> g(spec.sites, 0.0);
  for (std::size_t m = 0; m < spec.sites; ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < spec.topics; ++n) acc += theta[n] * spec.p(m, n) * series[n];
    g[m] = -acc;
  }
  return g;
}

std::vector<double> grad_net_at(const ModelSpec& spec, std::span<const double> x,
                                std::span<const double> theta, const CostSeriesPolicy& policy) {
  auto g = grad_reward_at(spec, x, theta);
  const auto gc = grad_cost_at(spec, x, theta, policy);
  for (std::size_t m = 0; m < spec.sites; ++m) g[m] -= gc[m];
  return g;
}

std::vector<double> acceptance_probs(const ModelSpec& spec, const Strategy& x) {
  validate(spec, x);
  return acceptance_probs_at(spec, x.x);
}

double expected_reward(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta) {
  validate(spec, x);
  validate(spec, theta);
  return reward_at(spec, x.x, theta.theta);
}

double expected_cost(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta,
                     const CostSeriesPolicy& policy) {
  validate(spec, x);
  validate(spec, theta);
  return cost_at(spec, x.x, theta.theta, policy);
}

double net_revenue(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta,
                   const CostSeriesPolicy& policy) {
  validate(spec, x);
  validate(spec, theta);
  return net_at(spec, x.x, theta.theta, policy);
}

std::vector<double> grad_reward(const ModelSpec& spec, const Strategy& x,
                                const InterestProfile& theta) {
  validate(spec, x);
  validate(spec, theta);
  return grad_reward_at(spec, x.x, theta.theta);
}

std::vector<double> grad_cost(const ModelSpec& spec, const Strategy& x,
                              const InterestProfile& theta, const CostSeriesPolicy& policy) {
  validate(spec, x);
  validate(spec, theta);
  return grad_cost_at(spec, x.x, theta.theta, policy);
}

std::vector<double> grad_net(const ModelSpec& spec, const Strategy& x,
                             const InterestProfile& theta, const CostSeriesPolicy& policy) {
  validate(spec, x);
  validate(spec, theta);
  return grad_net_at(spec, x.x, theta.theta, policy);
}

}  // namespace recsim
