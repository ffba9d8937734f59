#include "recsim/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "recsim/learn.hpp"
#include "recsim/model.hpp"
#include "recsim/optimize.hpp"
#include "recsim/rng.hpp"
#include "recsim/simulate.hpp"

namespace recsim::checks {

Strategy random_feasible(const ModelSpec& spec, std::uint64_t seed, std::uint64_t stream) {
  RngStream rng(seed, stream);
  std::vector<double> x(spec.sites);
  double sum = 0.0;
  for (auto& v : x) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (auto& v : x) v /= sum;
  return project_eps_simplex(x, spec.epsilon);
}

namespace {

double max_norm(std::span<const double> v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

// Componentwise central differences of a scalar field evaluated off the
// simplex (the analytic formulas extend smoothly).
template <typename Fn>
std::vector<double> central_differences(std::size_t dim, std::span<const double> x, double h,
                                        Fn value_at) {
  std::vector<double> g(dim);
  std::vector<double> p(x.begin(), x.end());
  for (std::size_t m = 0; m < dim; ++m) {
    const double keep = p[m];
    p[m] = keep + h;
    const double up = value_at(p);
    p[m] = keep - h;
    const double down = value_at(p);
    p[m] = keep;
    g[m] = (up - down) / (2.0 * h);
  }
  return g;
}

double rel_gap(std::span<const double> analytic, std::span<const double> fd) {
  double diff = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i)
    diff = std::max(diff, std::abs(analytic[i] - fd[i]));
  return diff / std::max(1.0, max_norm(analytic));
}

}  // namespace

double fd_gradient_max_rel_err(const ModelSpec& spec, const InterestProfile& theta,
                               const CostSeriesPolicy& policy, std::size_t points,
                               std::uint64_t seed, double step) {
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const Strategy x = random_feasible(spec, seed, i);
    const auto span_x = std::span<const double>(x.x);

    const auto g_r = grad_reward_at(spec, span_x, theta.theta);
    const auto fd_r = central_differences(spec.sites, span_x, step, [&](std::span<const double> p) {
      return reward_at(spec, p, theta.theta);
    });
    const auto g_c = grad_cost_at(spec, span_x, theta.theta, policy);
    const auto fd_c = central_differences(spec.sites, span_x, step, [&](std::span<const double> p) {
      return cost_at(spec, p, theta.theta, policy);
    });
    const auto g_f = grad_net_at(spec, span_x, theta.theta, policy);
    const auto fd_f = central_differences(spec.sites, span_x, step, [&](std::span<const double> p) {
      return net_at(spec, p, theta.theta, policy);
    });

    worst = std::max({worst, rel_gap(g_r, fd_r), rel_gap(g_c, fd_c), rel_gap(g_f, fd_f)});
  }
  return worst;
}

std::size_t convexity_violations(const ModelSpec& spec, const InterestProfile& theta,
                                 const CostSeriesPolicy& policy, std::size_t trials,
                                 double slack, std::uint64_t seed) {
  std::size_t violations = 0;
  RngStream lambda_rng(seed, 0xC0FFEE);
  for (std::size_t i = 0; i < trials; ++i) {
    const Strategy a = random_feasible(spec, seed, 2 * i + 1);
    const Strategy b = random_feasible(spec, seed, 2 * i + 2);
    const double lam = lambda_rng.uniform();
    std::vector<double> mid(spec.sites);
    for (std::size_t m = 0; m < spec.sites; ++m)
      mid[m] = lam * a.x[m] + (1.0 - lam) * b.x[m];
    const double c_mid = cost_at(spec, mid, theta.theta, policy);
    const double c_a = cost_at(spec, a.x, theta.theta, policy);
    const double c_b = cost_at(spec, b.x, theta.theta, policy);
    if (c_mid > lam * c_a + (1.0 - lam) * c_b + slack) ++violations;
  }
  return violations;
}

Strategy brute_force_projection(std::span<const double> y, double eps) {
  const std::size_t m = y.size();
  if (m == 0 || m > 20) throw dimension_error("brute-force projection supports 1..20 coordinates");
  Strategy best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    double sum = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) {
        sum += y[i];
        ++k;
      }
    const double tau =
        (sum - 1.0 + static_cast<double>(m - k) * eps) / static_cast<double>(k);
    std::vector<double> x(m, eps);
    bool feasible = true;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (1u << i)) {
        x[i] = y[i] - tau;
        feasible = feasible && x[i] >= eps - 1e-12;
      }
    if (!feasible) continue;
    double dist = 0.0;
    for (std::size_t i = 0; i < m; ++i) dist += (y[i] - x[i]) * (y[i] - x[i]);
    if (dist < best_dist) {
      best_dist = dist;
      best.x = std::move(x);
    }
  }
  return best;
}

double projection_vs_oracle_max_err(std::size_t dim, double eps, std::size_t points,
                                    std::uint64_t seed) {
  RngStream rng(seed, 0xBEEF);
  double worst = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    std::vector<double> y(dim);
    for (auto& v : y) v = 4.0 * rng.uniform() - 2.0;  // well outside the simplex too
    const Strategy fast = project_eps_simplex(y, eps);
    const Strategy slow = brute_force_projection(y, eps);
    double dist = 0.0;
    for (std::size_t j = 0; j < dim; ++j)
      dist += (fast.x[j] - slow.x[j]) * (fast.x[j] - slow.x[j]);
    worst = std::max(worst, std::sqrt(dist));
  }
  return worst;
}

BiasReport estimator_bias(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta,
                          const CostSeriesPolicy& policy, std::size_t sessions,
                          std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> sum(spec.sites, 0.0), sumsq(spec.sites, 0.0);
  for (std::size_t s = 0; s < sessions; ++s) {
    const auto outcome = sample_session(spec, x, theta, rng);
    const auto g = gradient_estimate(spec, x, outcome);
    // g is zero except at the accepted site.
    sum[outcome.site] += g[outcome.site];
    sumsq[outcome.site] += g[outcome.site] * g[outcome.site];
  }
  BiasReport rep;
  rep.analytic = grad_net(spec, x, theta, policy);
  rep.mc_mean.resize(spec.sites);
  rep.std_error.resize(spec.sites);
  const auto k = static_cast<double>(sessions);
  for (std::size_t m = 0; m < spec.sites; ++m) {
    rep.mc_mean[m] = sum[m] / k;
    const double var = std::max(0.0, sumsq[m] / k - rep.mc_mean[m] * rep.mc_mean[m]);
    rep.std_error[m] = std::sqrt(var / k);
    if (rep.std_error[m] > 0.0)
      rep.max_z = std::max(rep.max_z, std::abs(rep.mc_mean[m] - rep.analytic[m]) / rep.std_error[m]);
  }
  return rep;
}

SessionStatsReport session_statistics(const ModelSpec& spec, const Strategy& x,
                                      const InterestProfile& theta, std::size_t sessions,
                                      std::uint64_t seed) {
  SessionStatsReport rep;
  const auto rho = acceptance_probs(spec, x);

  // Per-topic: force the session topic with a degenerate profile.
  for (std::size_t n = 0; n < spec.topics; ++n) {
    InterestProfile point;
    point.theta.assign(spec.topics, 0.0);
    point.theta[n] = 1.0;
    RngStream rng(seed, n + 1);
    double t_sum = 0.0, t_sumsq = 0.0;
    std::vector<double> site_count(spec.sites, 0.0);
    for (std::size_t s = 0; s < sessions; ++s) {
      const auto outcome = sample_session(spec, x, point, rng);
      const auto t = static_cast<double>(outcome.trials);
      t_sum += t;
      t_sumsq += t * t;
      site_count[outcome.site] += 1.0;
    }
    const auto k = static_cast<double>(sessions);
    const double t_mean = t_sum / k;
    const double t_se = std::sqrt(std::max(0.0, t_sumsq / k - t_mean * t_mean) / k);
    if (t_se > 0.0)
      rep.max_trials_z = std::max(rep.max_trials_z, std::abs(t_mean - 1.0 / rho[n]) / t_se);
    for (std::size_t m = 0; m < spec.sites; ++m) {
      const double q = x.x[m] * spec.p(m, n) / rho[n];
      const double se = std::sqrt(std::max(q * (1.0 - q), 1e-12) / k);
      rep.max_site_z = std::max(rep.max_site_z, std::abs(site_count[m] / k - q) / se);
    }
  }

  // Interest-topic marginal under the full profile.
  RngStream rng(seed, 0);
  std::vector<double> topic_count(spec.topics, 0.0);
  for (std::size_t s = 0; s < sessions; ++s)
    topic_count[sample_session(spec, x, theta, rng).topic] += 1.0;
  for (std::size_t n = 0; n < spec.topics; ++n) {
    const double q = theta.theta[n];
    if (q <= 0.0 || q >= 1.0) continue;
    const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(sessions));
    rep.max_topic_z =
        std::max(rep.max_topic_z, std::abs(topic_count[n] / static_cast<double>(sessions) - q) / se);
  }
  return rep;
}

std::vector<CheckResult> run_battery(const ModelSpec& spec, const InterestProfile& theta,
                                     const CostSeriesPolicy& policy, std::uint64_t seed) {
  std::vector<CheckResult> results;

  const double fd = fd_gradient_max_rel_err(spec, theta, policy, 100, seed);
  results.push_back({"gradient finite differences (max rel err)", fd <= 1e-5, fd, 1e-5});

  const auto convex = static_cast<double>(convexity_violations(spec, theta, policy, 1000, 1e-8, seed));
  results.push_back({"cost convexity midpoint probes (violations)", convex == 0, convex, 0});

  const double proj = projection_vs_oracle_max_err(spec.sites, spec.epsilon, 200, seed);
  results.push_back({"projection vs brute-force oracle (max L2)", proj <= 1e-7, proj, 1e-7});

  const auto bias = estimator_bias(spec, uniform_strategy(spec), theta, policy, 200'000, seed);
  results.push_back({"estimator unbiasedness (max z, 2e5 sessions)", bias.max_z <= 4.0, bias.max_z, 4.0});

  const auto stats = session_statistics(spec, uniform_strategy(spec), theta, 100'000, seed);
  results.push_back({"session trials vs geometric mean (max z)", stats.max_trials_z <= 3.0,
                     stats.max_trials_z, 3.0});
  results.push_back({"accepted-site law (max z)", stats.max_site_z <= 3.0, stats.max_site_z, 3.0});
  results.push_back({"interest-topic marginal (max z)", stats.max_topic_z <= 3.0,
                     stats.max_topic_z, 3.0});

  // Gradient boundedness shadow: no NaN/Inf over seeded feasible points.
  double grad_bound = 0.0;
  bool finite = true;
  for (std::size_t i = 0; i < 1000; ++i) {
    const Strategy x = random_feasible(spec, seed ^ 0x5EED, i);
    const auto g = grad_net_at(spec, x.x, theta.theta, policy);
    for (double v : g) {
      finite = finite && std::isfinite(v);
      grad_bound = std::max(grad_bound, std::abs(v));
    }
  }
  results.push_back({"gradient boundedness over 1000 points (max |grad|)", finite, grad_bound,
                     std::numeric_limits<double>::infinity()});

  return results;
}

}  // namespace recsim::checks
