#include <doctest.h>

#include <cmath>

#include "recsim/checks.hpp"
#include "recsim/model.hpp"
#include "recsim/presets.hpp"
#include "recsim/simulate.hpp"

using namespace recsim;

namespace {
const InterestProfile kThetaTable1{{0.03, 0.05, 0.02, 0.9}};
}

TEST_CASE("certain coverage ends every session on the first trial") {
  ModelSpec spec;
  spec.sites = 2;
  spec.topics = 3;
  spec.publishing = {1, 1, 1, 1, 1, 1};
  spec.reward = {10, 20};
  spec.kappa = 2.5;
  spec.epsilon = 0.1;
  const Strategy x{{0.5, 0.5}};
  const InterestProfile theta{{0.2, 0.3, 0.5}};
  RngStream rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto s = sample_session(spec, x, theta, rng);
    CHECK(s.trials == 1);
    for (auto chi : s.exposures) CHECK(chi == 1);
  }
}

TEST_CASE("identical seeds give byte-identical outcome sequences") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  const Strategy x = uniform_strategy(spec);
  RngStream a(123), b(123);
  for (int i = 0; i < 200; ++i) {
    const auto sa = sample_session(spec, x, kThetaTable1, a);
    const auto sb = sample_session(spec, x, kThetaTable1, b);
    CHECK(sa.site == sb.site);
    CHECK(sa.topic == sb.topic);
    CHECK(sa.trials == sb.trials);
    CHECK(sa.exposures == sb.exposures);
  }
}

TEST_CASE("exposure counts are consistent with the session") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  const Strategy x = uniform_strategy(spec);
  RngStream rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto s = sample_session(spec, x, kThetaTable1, rng);
    REQUIRE(s.trials >= 1);
    CHECK(s.exposures[s.topic] >= 1);  // accepting trial covered the topic
    std::uint64_t total = 0;
    for (auto chi : s.exposures) {
      CHECK(chi <= s.trials);
      total += chi;
    }
    CHECK(total <= s.trials * spec.topics);
  }
}

TEST_CASE("session statistics match the geometric/acceptance laws") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  const auto stats =
      checks::session_statistics(spec, uniform_strategy(spec), kThetaTable1, 100'000, 31);
  CHECK(stats.max_trials_z <= 3.0);
  CHECK(stats.max_site_z <= 3.0);
  CHECK(stats.max_topic_z <= 3.0);
}

TEST_CASE("empirical cost is exactly one for kappa = 0") {
  auto spec = preset_model({150, 125, 150, 400, 100});
  spec.kappa = 0.0;
  RngStream rng(5);
  CHECK(empirical_cost(spec, uniform_strategy(spec), kThetaTable1, 500, rng) == 1.0);
}

TEST_CASE("empirical cost converges to the closed form for kappa = 1") {
  auto spec = preset_model({150, 125, 150, 400, 100});
  spec.kappa = 1.0;
  const Strategy x = uniform_strategy(spec);
  const auto rho = acceptance_probs(spec, x);
  double expect = 0.0;
  for (std::size_t n = 0; n < 4; ++n) expect += kThetaTable1.theta[n] / rho[n];

  // Manual pass to get a standard error alongside the mean.
  RngStream rng(17);
  const std::size_t k = 100'000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto t = static_cast<double>(sample_session(spec, x, kThetaTable1, rng).trials);
    sum += t;
    sumsq += t * t;
  }
  const double mean = sum / k;
  const double se = std::sqrt((sumsq / k - mean * mean) / k);
  CHECK(std::abs(mean - expect) <= 3.0 * se);

  // empirical_cost consumes the same draws, so it reproduces the mean.
  RngStream rng2(17);
  CHECK(empirical_cost(spec, x, kThetaTable1, k, rng2) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("empirical cost agrees with the series for kappa = 2.5") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  const Strategy x = uniform_strategy(spec);
  const double series = expected_cost(spec, x, kThetaTable1);

  RngStream rng(29);
  const std::size_t k = 100'000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double c =
        std::pow(static_cast<double>(sample_session(spec, x, kThetaTable1, rng).trials), 2.5);
    sum += c;
    sumsq += c * c;
  }
  const double mean = sum / k;
  const double se = std::sqrt((sumsq / k - mean * mean) / k);
  CHECK(std::abs(mean - series) <= 3.0 * se);
}
