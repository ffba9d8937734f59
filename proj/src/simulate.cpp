#include "recsim/simulate.hpp"

#include <cmath>

#include "recsim/model.hpp"

namespace recsim {

SessionOutcome sample_session(const ModelSpec& spec, const Strategy& x,
                              const InterestProfile& theta, RngStream& rng) {
  validate(spec, x);
  validate(spec, theta);

  SessionOutcome out;
  out.exposures.assign(spec.topics, 0);
  out.topic = rng.categorical(theta.theta);

  for (std::uint64_t t = 1; t <= kTrialCap; ++t) {
    const std::size_t m = rng.categorical(x.x);
    bool accepted = false;
    for (std::size_t n = 0; n < spec.topics; ++n) {
      const bool covered = rng.bernoulli(spec.p(m, n));
      if (covered) {
        ++out.exposures[n];
        if (n == out.topic) accepted = true;
      }
    }
    if (accepted) {
      out.site = m;
      out.trials = t;
      return out;
    }
  }
  throw degenerate_error("session exceeded trial cap; topic " + std::to_string(out.topic) +
                         " is effectively never covered under this strategy");
}

double empirical_cost(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta,
                      std::size_t sessions, RngStream& rng) {
  validate(spec, x);
  validate(spec, theta);
  double sum = 0.0;
  for (std::size_t s = 0; s < sessions; ++s) {
    const auto outcome = sample_session(spec, x, theta, rng);
    sum += std::pow(static_cast<double>(outcome.trials), spec.kappa);
  }
  return sum / static_cast<double>(sessions);
}

}  // namespace recsim
