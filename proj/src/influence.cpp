#include "recsim/influence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "recsim/model.hpp"
#include "recsim/optimize.hpp"

namespace recsim {

void validate(const ModelSpec& spec, const InfluenceSpec& influence) {
  if (influence.topics.size() != spec.topics)
    throw dimension_error("influence spec length does not match topic count");
  if (!(influence.v_floor >= 0.0)) throw feasibility_error("v_floor must be non-negative");
  bool attainable = influence.v_floor > 0.0;
  for (std::size_t n = 0; n < influence.topics.size(); ++n) {
    const auto& t = influence.topics[n];
    if (!(t.xi >= 0.0) || t.xi > 1.0)
      throw feasibility_error("xi must lie in [0,1] (topic " + std::to_string(n) + ")");
    if (!(t.beta >= 1.0))
      throw feasibility_error("beta must be at least 1 (topic " + std::to_string(n) + ")");
    if (t.xi > 0.0 &&
        (t.type != InfluenceType::type_b || t.beta > 1.0))
      attainable = true;
  }
  if (!attainable)
    throw feasibility_error(
        "no topic has a positive attainable influence level; every session would be degenerate");
}

std::vector<std::string> influence_warnings(const InfluenceSpec& influence) {
  std::vector<std::string> warnings;
  for (std::size_t n = 0; n < influence.topics.size(); ++n) {
    const auto& t = influence.topics[n];
    if (t.type == InfluenceType::type_b && t.beta == 1.0)
      warnings.push_back("topic " + std::to_string(n) +
                         ": Type-B with beta = 1 pins its influence level to 0 "
                         "(not a no-influence configuration)");
  }
  return warnings;
}

double influence_level(const TopicInfluence& topic, std::uint32_t exposures) {
  const double decay = std::pow(topic.beta, -static_cast<double>(exposures));
  switch (topic.type) {
    case InfluenceType::type_a: return topic.xi * decay;
    case InfluenceType::type_b: return topic.xi * (1.0 - decay);
    case InfluenceType::none: return topic.xi;
  }
  return topic.xi;
}

std::vector<double> influence_weights(std::span<const double> v) {
  double sum = 0.0;
  for (double a : v) {
    if (!(a >= 0.0)) throw feasibility_error("influence levels must be non-negative");
    sum += a;
  }
  if (sum < 1e-12)
    throw degenerate_error("degenerate influence: total level below 1e-12 "
                           "(all Type-B topics unexposed?)");
  std::vector<double> w(v.begin(), v.end());
  for (auto& a : w) a /= sum;
  return w;
}

InterestProfile theta_step(const InterestProfile& theta, std::span<const double> w, double b_s) {
  if (w.size() != theta.theta.size())
    throw dimension_error("weight vector length does not match interest profile");
  if (!(b_s >= 0.0) || b_s > 1.0)
    throw feasibility_error("influence rate must lie in [0,1]");
  InterestProfile out;
  out.theta.resize(w.size());
  double sum = 0.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    out.theta[n] = theta.theta[n] + b_s * (w[n] - theta.theta[n]);
    sum += out.theta[n];
  }
  if (std::abs(sum - 1.0) > 1e-12)
    for (auto& v : out.theta) v /= sum;
  return out;
}

namespace {

std::vector<double> levels_from_exposures(const InfluenceSpec& influence,
                                          const std::vector<std::uint32_t>& chi) {
  std::vector<double> v(chi.size());
  for (std::size_t n = 0; n < chi.size(); ++n) {
    v[n] = influence_level(influence.topics[n], chi[n]);
    if (v[n] < influence.v_floor) v[n] = influence.v_floor;
  }
  return v;
}

}  // namespace

CoupledTrace run_coupled(const ModelSpec& spec, const InfluenceSpec& influence,
                         const CoupledOptions& options) {
  validate(spec);
  validate(spec, influence);
  if (options.decimate == 0) throw feasibility_error("decimation stride must be at least 1");

  RngStream rng(options.seed);
  Strategy x = options.x0 ? *options.x0 : uniform_strategy(spec);
  InterestProfile theta = options.theta0 ? *options.theta0 : uniform_profile(spec);
  validate(spec, x);
  validate(spec, theta);

  CoupledTrace trace;
  trace.sessions = options.sessions;
  trace.a = options.a;
  trace.b = options.mode == CoupledMode::joint ? options.a : options.b;
  trace.records.reserve(options.sessions / options.decimate + 2);

  for (std::uint64_t s = 1; s <= options.sessions; ++s) {
    const auto outcome = sample_session(spec, x, theta, rng);
    const auto g = gradient_estimate(spec, x, outcome);
    const auto v = levels_from_exposures(influence, outcome.exposures);
    const auto w = influence_weights(v);

    if (options.mode == CoupledMode::two_timescale) {
      x = learner_step(spec, x, g, options.a(s));
      theta = theta_step(theta, w, options.b(s));
    } else {
      // Stacked single-timescale iterate: both blocks step with a(s), the
      // theta block is projected onto the plain simplex.
      const double a = options.a(s);
      x = learner_step(spec, x, g, a);
      std::vector<double> ty(theta.theta);
      for (std::size_t n = 0; n < ty.size(); ++n) ty[n] += a * (w[n] - theta.theta[n]);
      theta = InterestProfile{project_eps_simplex(ty, 0.0).x};
    }

    if (s % options.decimate == 0 || s == options.sessions) {
      CoupledRecord rec;
      rec.session = s;
      rec.x = x.x;
      rec.theta = theta.theta;
      rec.f = net_at(spec, x.x, theta.theta, options.policy);
      trace.records.push_back(std::move(rec));
    }
  }
  trace.final_x = x;
  trace.final_theta = theta;
  return trace;
}

namespace {

std::vector<double> trailing_mean(const std::vector<CoupledRecord>& records, double fraction,
                                  bool use_theta) {
  if (records.empty()) throw feasibility_error("empty trace");
  auto count =
      static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(records.size())));
  count = std::min(std::max<std::size_t>(count, 1), records.size());
  const auto& first = use_theta ? records.front().theta : records.front().x;
  std::vector<double> mean(first.size(), 0.0);
  for (std::size_t i = records.size() - count; i < records.size(); ++i) {
    const auto& v = use_theta ? records[i].theta : records[i].x;
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += v[j];
  }
  for (auto& v : mean) v /= static_cast<double>(count);
  return mean;
}

}  // namespace

std::vector<double> window_mean_x(const CoupledTrace& trace, double trailing_fraction) {
  return trailing_mean(trace.records, trailing_fraction, false);
}

std::vector<double> window_mean_theta(const CoupledTrace& trace, double trailing_fraction) {
  return trailing_mean(trace.records, trailing_fraction, true);
}

double window_mean_f(const CoupledTrace& trace, double trailing_fraction) {
  if (trace.records.empty()) throw feasibility_error("empty trace");
  auto count = static_cast<std::size_t>(
      std::ceil(trailing_fraction * static_cast<double>(trace.records.size())));
  count = std::min(std::max<std::size_t>(count, 1), trace.records.size());
  double sum = 0.0;
  for (std::size_t i = trace.records.size() - count; i < trace.records.size(); ++i)
    sum += trace.records[i].f;
  return sum / static_cast<double>(count);
}

std::string to_csv(const CoupledTrace& trace) {
  std::string out;
  const std::size_t m = trace.records.empty() ? 0 : trace.records.front().x.size();
  const std::size_t n = trace.records.empty() ? 0 : trace.records.front().theta.size();
  out += "s";
  for (std::size_t i = 1; i <= m; ++i) out += ",x_" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) out += ",theta_" + std::to_string(i);
  out += ",F\n";
  char buf[32];
  for (const auto& rec : trace.records) {
    out += std::to_string(rec.session);
    for (double v : rec.x) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out += buf;
    }
    for (double v : rec.theta) {
      std::snprintf(buf, sizeof(buf), ",%.17g", v);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g", rec.f);
    out += buf;
    out += "\n";
  }
  return out;
}

}  // namespace recsim
