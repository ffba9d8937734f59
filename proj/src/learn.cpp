#include "recsim/learn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "recsim/model.hpp"
#include "recsim/optimize.hpp"

namespace recsim {

StepSchedule StepSchedule::learning(double a0, double p) {
  if (!(a0 > 0.0)) throw feasibility_error("step scale must be positive");
  if (!(p > 0.5) || p > 1.0)
    throw feasibility_error("learning schedule exponent must lie in (0.5, 1]");
  return StepSchedule(a0, p);
}

StepSchedule StepSchedule::influence(double b0, double p) {
  if (!(b0 > 0.0)) throw feasibility_error("step scale must be positive");
  if (!(p > 0.0)) throw feasibility_error("influence schedule exponent must be positive");
  StepSchedule s(b0, p);
  if (s(1) > 1.0) throw feasibility_error("influence rate b(1) exceeds 1");
  return s;
}

std::vector<double> gradient_estimate(const ModelSpec& spec, const Strategy& x,
                                      const SessionOutcome& outcome) {
  validate(spec, x);
  if (outcome.exposures.size() != spec.topics)
    throw dimension_error("outcome exposure vector does not match topic count");
  const std::size_t m = outcome.site;
  const std::size_t n = outcome.topic;
  if (m >= spec.sites || n >= spec.topics)
    throw dimension_error("outcome site/topic index out of range");

  double rho = 0.0, num = 0.0;
  for (std::size_t k = 0; k < spec.sites; ++k) {
    rho += x.x[k] * spec.p(k, n);
    num += spec.reward[k] * x.x[k] * spec.p(k, n);
  }
  const double t = static_cast<double>(outcome.trials);
  const double dc_next = detail::delta_cost(t + 1.0, spec.kappa);

  std::vector<double> g(spec.sites, 0.0);
  g[m] = (spec.reward[m] - num / rho + t * dc_next) / x.x[m];
  return g;
}

Strategy learner_step(const ModelSpec& spec, const Strategy& x, std::span<const double> g,
                      double a_s) {
  validate(spec, x);
  if (g.size() != spec.sites) throw dimension_error("gradient length does not match site count");
  for (double v : g)
    if (!std::isfinite(v)) throw degenerate_error("non-finite gradient estimate");
  if (!std::isfinite(a_s) || a_s < 0.0) throw feasibility_error("step size must be non-negative");
  std::vector<double> y(x.x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a_s * g[i];
  return project_eps_simplex(y, spec.epsilon);
}

namespace {

Strategy random_init(const ModelSpec& spec, RngStream& rng) {
  // M uniforms on [0,1], normalized, completed to feasibility by projection.
  std::vector<double> x(spec.sites);
  double sum = 0.0;
  for (auto& v : x) {
    v = rng.uniform();
    sum += v;
  }
  if (sum <= 0.0) return uniform_strategy(spec);
  for (auto& v : x) v /= sum;
  return project_eps_simplex(x, spec.epsilon);
}

double l2_err(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

LearnTrace run_learning(const ModelSpec& spec, const InterestProfile& theta,
                        const LearnOptions& options) {
  validate(spec);
  validate(spec, theta);
  if (options.decimate == 0) throw feasibility_error("decimation stride must be at least 1");
  if (options.x_ref) validate(spec, *options.x_ref);

  RngStream rng(options.seed);
  Strategy x = options.x0 ? *options.x0 : random_init(spec, rng);
  validate(spec, x);

  LearnTrace trace;
  trace.sessions = options.sessions;
  trace.records.reserve(options.sessions / options.decimate + 2);

  for (std::uint64_t s = 1; s <= options.sessions; ++s) {
    const auto outcome = sample_session(spec, x, theta, rng);
    const auto g = gradient_estimate(spec, x, outcome);
    x = learner_step(spec, x, g, options.schedule(s));

    if (s % options.decimate == 0 || s == options.sessions) {
      LearnRecord rec;
      rec.session = s;
      rec.x = x.x;
      rec.f = net_at(spec, x.x, theta.theta, options.policy);
      if (options.x_ref) rec.err = l2_err(x.x, options.x_ref->x);
      rec.site = outcome.site;
      rec.topic = outcome.topic;
      rec.trials = outcome.trials;
      trace.records.push_back(std::move(rec));
    }
  }
  trace.final_x = x;
  return trace;
}

std::vector<double> window_mean_x(const LearnTrace& trace, double trailing_fraction) {
  if (trace.records.empty()) throw feasibility_error("empty trace");
  const auto total = trace.records.size();
  auto count = static_cast<std::size_t>(std::ceil(trailing_fraction * static_cast<double>(total)));
  count = std::min(std::max<std::size_t>(count, 1), total);
  std::vector<double> mean(trace.records.front().x.size(), 0.0);
  for (std::size_t i = total - count; i < total; ++i)
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += trace.records[i].x[j];
  for (auto& v : mean) v /= static_cast<double>(count);
  return mean;
}

std::string to_csv(const LearnTrace& trace) {
  std::string out;
  const std::size_t m = trace.records.empty() ? 0 : trace.records.front().x.size();
  out += "s";
  for (std::size_t i = 1; i <= m; ++i) out += ",x_" + std::to_string(i);
  out += ",F,err\n";
  char buf[32];
  for (const auto& rec : trace.records) {
    out += std::to_string(rec.session);
    for (double v : rec.x) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g", rec.f);
    out += buf;
    out += ",";
    if (rec.err) {
      std::snprintf(buf, sizeof(buf), "%.17g", *rec.err);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace recsim
