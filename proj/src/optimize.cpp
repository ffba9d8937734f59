#include "recsim/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "recsim/model.hpp"
#include "recsim/rng.hpp"

namespace recsim {

Strategy project_eps_simplex(std::span<const double> y, double eps) {
  const std::size_t m = y.size();
  if (m == 0) throw dimension_error("cannot project an empty vector");
  if (!(eps >= 0.0) || static_cast<double>(m) * eps > 1.0 + 1e-15)
    throw feasibility_error("infeasible floor: M * eps exceeds 1");

  // Threshold search on sorted coordinates: with u descending, the active
  // set is a prefix {1..k}, tau_k = (sum_{i<=k} u_i - 1 + (M-k) eps) / k,
  // and k* is the largest k with u_k - tau_k > eps.
  std::vector<double> u(y.begin(), y.end());
  std::sort(u.begin(), u.end(), std::greater<>());

  bool found = false;
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t k = 1; k <= m; ++k) {
    prefix += u[k - 1];
    const double tau_k =
        (prefix - 1.0 + static_cast<double>(m - k) * eps) / static_cast<double>(k);
    if (u[k - 1] - tau_k > eps) {
      tau = tau_k;
      found = true;
    }
  }
  if (!found) {
    // No coordinate clears the floor, which only happens at M*eps == 1.
    Strategy out;
    out.x.assign(m, eps);
    return out;
  }

  // Snap a numerically-zero threshold to exact zero so that re-projecting an
  // output reproduces it bit-identically (the second pass solves tau = 0).
  double scale = 1.0;
  for (double v : u) scale = std::max(scale, std::abs(v));
  if (std::abs(tau) <= 1e-12 * scale) tau = 0.0;

  Strategy out;
  out.x.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.x[i] = std::max(y[i] - tau, eps);
  return out;
}

double stationarity_gap(const ModelSpec& spec, const InterestProfile& theta,
                        std::span<const double> x, const CostSeriesPolicy& policy, double a_ref) {
  const auto g = grad_net_at(spec, x, theta.theta, policy);
  std::vector<double> y(x.begin(), x.end());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a_ref * g[i];
  const auto px = project_eps_simplex(y, spec.epsilon);
  double gap = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) gap = std::max(gap, std::abs(px.x[i] - x[i]));
  return gap;
}

namespace {

constexpr double kStationarityStep = 1e-4;

std::vector<double> random_feasible(const ModelSpec& spec, RngStream& rng) {
  // Dirichlet(1) point (uniform on the simplex), then projected to D_eps.
  std::vector<double> x(spec.sites);
  double sum = 0.0;
  for (auto& v : x) {
    v = -std::log(1.0 - rng.uniform());
    sum += v;
  }
  for (auto& v : x) v /= sum;
  return project_eps_simplex(x, spec.epsilon).x;
}

StartResult run_start(const ModelSpec& spec, const InterestProfile& theta,
                      const CostSeriesPolicy& policy, const SolveOptions& opt,
                      std::vector<double> x) {
  StartResult res;
  const auto f_at = [&](std::span<const double> p) { return net_at(spec, p, theta.theta, policy); };
  const auto move = [&](std::span<const double> p, double a, const std::vector<double>& g) {
    std::vector<double> y(p.begin(), p.end());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * g[i];
    return project_eps_simplex(y, spec.epsilon).x;
  };
  const auto gap_at = [&](std::span<const double> p, const std::vector<double>& g) {
    const auto px = move(p, kStationarityStep, g);
    double gap = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) gap = std::max(gap, std::abs(px[i] - p[i]));
    return gap;
  };

  std::size_t iters = 0;
  bool stationary = false;
  try {
    // Phase 1: diminishing steps a_t = step0/(1+t).
    for (std::size_t t = 0; t < opt.max_iters; ++t) {
      const auto g = grad_net_at(spec, x, theta.theta, policy);
      const double a = opt.step0 / (1.0 + static_cast<double>(t));
      auto next = move(x, a, g);
      ++iters;
      double diff = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::abs(next[i] - x[i]));
      x = std::move(next);
      if (diff < opt.tol) break;
      if (t % 25 == 24 && gap_at(x, grad_net_at(spec, x, theta.theta, policy)) < 100.0 * opt.tol)
        break;
    }

    // Phase 2: monotone backtracking polish until projected stationarity.
    double f = f_at(x);
    while (iters < opt.max_iters) {
      const auto g = grad_net_at(spec, x, theta.theta, policy);
      if (gap_at(x, g) < opt.tol) {
        stationary = true;
        break;
      }
      double a = opt.step0;
      bool accepted = false;
      while (a > 1e-12) {
        auto cand = move(x, a, g);
        const double fc = f_at(cand);
        if (fc >= f - 1e-12) {
          x = std::move(cand);
          f = fc;
          accepted = true;
          break;
        }
        a *= 0.5;
      }
      ++iters;
      if (!accepted) break;  // no ascent step left; report as-is
    }
    res.f = f_at(x);
    if (!std::isfinite(res.f)) throw degenerate_error("non-finite objective");
  } catch (const error&) {
    // Abort this start (e.g. non-finite F or series breakdown); flag it.
    res.x = std::move(x);
    res.f = -std::numeric_limits<double>::infinity();
    res.iterations = iters;
    res.converged = false;
    return res;
  }
  res.x = std::move(x);
  res.iterations = iters;
  res.converged = stationary;
  return res;
}

}  // namespace

SolveReport solve_static(const ModelSpec& spec, const InterestProfile& theta,
                         const CostSeriesPolicy& policy, const SolveOptions& options) {
  validate(spec);
  validate(spec, theta);
  validate(policy);

  // Start points: the uniform strategy plus `starts` seeded random points.
  std::vector<std::vector<double>> inits;
  inits.push_back(project_eps_simplex(uniform_strategy(spec).x, spec.epsilon).x);
  for (std::size_t i = 0; i < options.starts; ++i) {
    RngStream rng(options.seed, i);
    inits.push_back(random_feasible(spec, rng));
  }

  std::vector<StartResult> results(inits.size());
  const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < inits.size(); ++i)
      results[i] = run_start(spec, theta, policy, options, inits[i]);
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= inits.size()) return;
        results[i] = run_start(spec, theta, policy, options, inits[i]);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < std::min(jobs, inits.size()); ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SolveReport report;
  report.starts = results.size();
  report.start_results = std::move(results);
  std::size_t best = 0;
  for (std::size_t i = 1; i < report.start_results.size(); ++i)
    if (report.start_results[i].f > report.start_results[best].f) best = i;
  report.best_x = Strategy{report.start_results[best].x};
  report.best_f = report.start_results[best].f;
  for (std::size_t i = 0; i < report.start_results.size(); ++i)
    if (report.start_results[i].f >= report.best_f - 0.1) report.near_best.push_back(i);
  return report;
}

namespace {

// Lattice point count with per-coordinate unit caps: compositions of
// `total` into M parts with part i <= cap[i].
std::size_t count_compositions(const std::vector<std::size_t>& cap, std::size_t total,
                               std::size_t limit) {
  std::vector<std::size_t> ways(total + 1, 0);
  ways[0] = 1;
  for (std::size_t i = 0; i < cap.size(); ++i) {
    std::vector<std::size_t> nxt(total + 1, 0);
    for (std::size_t t = 0; t <= total; ++t) {
      if (ways[t] == 0) continue;
      for (std::size_t k = 0; k <= cap[i] && t + k <= total; ++k) {
        nxt[t + k] += ways[t];
        if (nxt[t + k] > limit) nxt[t + k] = limit + 1;  // saturate
      }
    }
    ways = std::move(nxt);
  }
  return ways[total];
}

}  // namespace

GridResult grid_oracle(const ModelSpec& spec, const InterestProfile& theta,
                       const CostSeriesPolicy& policy, double resolution,
                       const GridOptions& options) {
  validate(spec);
  validate(spec, theta);
  if (!(resolution > 0.0)) throw feasibility_error("grid resolution must be positive");

  const std::size_t m = spec.sites;
  const double mass = 1.0 - static_cast<double>(m) * spec.epsilon;
  const double units = mass / resolution;
  const auto total = static_cast<std::size_t>(std::llround(units));
  if (std::abs(units - static_cast<double>(total)) > 1e-9)
    throw feasibility_error("no lattice point sums to 1: (1 - M eps) is not a multiple of the resolution");

  // Per-coordinate unit bounds from the optional box.
  std::vector<std::size_t> lo(m, 0), cap(m, total);
  if (!options.lower.empty() || !options.upper.empty()) {
    if (options.lower.size() != m || options.upper.size() != m)
      throw dimension_error("grid box bounds must match site count");
    for (std::size_t i = 0; i < m; ++i) {
      const double lo_x = std::max(options.lower[i], spec.epsilon);
      const double hi_x = std::min(options.upper[i], 1.0);
      lo[i] = static_cast<std::size_t>(
          std::max(0.0, std::ceil((lo_x - spec.epsilon) / resolution - 1e-9)));
      const auto hi_units = static_cast<long long>(
          std::floor((hi_x - spec.epsilon) / resolution + 1e-9));
      if (hi_units < static_cast<long long>(lo[i]))
        throw feasibility_error("empty grid box for coordinate " + std::to_string(i));
      cap[i] = std::min<std::size_t>(total, static_cast<std::size_t>(hi_units));
    }
  }

  std::size_t base = 0;
  std::vector<std::size_t> slack_cap(m);
  for (std::size_t i = 0; i < m; ++i) {
    base += lo[i];
    if (lo[i] > cap[i] || base > total)
      throw feasibility_error("grid box does not intersect the simplex lattice");
    slack_cap[i] = cap[i] - lo[i];
  }
  const std::size_t slack = total - base;
  const std::size_t points = count_compositions(slack_cap, slack, options.max_points);
  if (points > options.max_points)
    throw feasibility_error("grid lattice exceeds " + std::to_string(options.max_points) +
                            " points; use a coarser resolution");

  GridResult best;
  best.f = -std::numeric_limits<double>::infinity();
  best.points = points;
  std::vector<std::size_t> k(m, 0);
  std::vector<double> x(m, 0.0);

  // Depth-first over compositions of `slack` respecting slack_cap.
  std::function<void(std::size_t, std::size_t)> visit = [&](std::size_t i, std::size_t left) {
    if (i + 1 == m) {
      if (left > slack_cap[i]) return;
      k[i] = left;
      for (std::size_t j = 0; j < m; ++j)
        x[j] = spec.epsilon + static_cast<double>(lo[j] + k[j]) * resolution;
      const double f = net_at(spec, x, theta.theta, policy);
      if (f > best.f) {
        best.f = f;
        best.x.x = x;
      }
      return;
    }
    // Prune branches that cannot spend the remaining mass.
    std::size_t tail_cap = 0;
    for (std::size_t j = i + 1; j < m; ++j) tail_cap += slack_cap[j];
    const std::size_t kmin = left > tail_cap ? left - tail_cap : 0;
    for (std::size_t v = kmin; v <= std::min(slack_cap[i], left); ++v) {
      k[i] = v;
      visit(i + 1, left - v);
    }
  };
  visit(0, slack);

  if (!best.x.x.empty()) return best;
  throw feasibility_error("grid box contains no feasible lattice point");
}

GridResult grid_refine(const ModelSpec& spec, const InterestProfile& theta,
                       const CostSeriesPolicy& policy, double coarse, double fine,
                       std::size_t max_points) {
  GridOptions opt;
  opt.max_points = max_points;
  const GridResult first = grid_oracle(spec, theta, policy, coarse, opt);
  GridOptions box;
  box.max_points = max_points;
  box.lower.resize(spec.sites);
  box.upper.resize(spec.sites);
  for (std::size_t i = 0; i < spec.sites; ++i) {
    box.lower[i] = first.x.x[i] - coarse;
    box.upper[i] = first.x.x[i] + coarse;
  }
  GridResult second = grid_oracle(spec, theta, policy, fine, box);
  second.points += first.points;
  if (first.f > second.f) {
    second.f = first.f;
    second.x = first.x;
  }
  return second;
}

}  // namespace recsim
