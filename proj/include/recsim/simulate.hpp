#pragma once

#include <cstdint>
#include <vector>

#include "recsim/rng.hpp"
#include "recsim/types.hpp"

namespace recsim {

// One user session: the accepted site, the session's interest topic, the
// number of trials until acceptance, and how often each topic was covered
// across all trials (accepting trial included).
struct SessionOutcome {
  std::size_t site = 0;                  // m(s)
  std::size_t topic = 0;                 // n(s)
  std::uint64_t trials = 0;              // T(s) >= 1
  std::vector<std::uint32_t> exposures;  // chi(s), length N
};

// Draws the session topic from theta, then repeats trials (site ~ x,
// independent Bernoulli coverage per topic) until the realized coverage
// includes the topic. Termination is almost sure for rho_n > 0; a trial cap
// guards against degenerate inputs.
SessionOutcome sample_session(const ModelSpec& spec, const Strategy& x,
                              const InterestProfile& theta, RngStream& rng);

// Monte-Carlo mean of T^kappa over independent sessions.
double empirical_cost(const ModelSpec& spec, const Strategy& x, const InterestProfile& theta,
                      std::size_t sessions, RngStream& rng);

inline constexpr std::uint64_t kTrialCap = 100'000'000;

}  // namespace recsim
