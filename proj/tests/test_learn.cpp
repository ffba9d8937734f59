#include <doctest.h>

#include <cmath>

#include "recsim/checks.hpp"
#include "recsim/learn.hpp"
#include "recsim/model.hpp"
#include "recsim/optimize.hpp"
#include "recsim/presets.hpp"

using namespace recsim;

namespace {
const InterestProfile kThetaTable1{{0.03, 0.05, 0.02, 0.9}};
}

TEST_CASE("step schedule families are validated") {
  CHECK_NOTHROW(StepSchedule::learning(0.01, 2.0 / 3.0));
  CHECK_NOTHROW(StepSchedule::learning(0.1, 1.0));
  CHECK_THROWS_AS(StepSchedule::learning(0.01, 0.5), feasibility_error);
  CHECK_THROWS_AS(StepSchedule::learning(0.01, 1.4), feasibility_error);
  CHECK_THROWS_AS(StepSchedule::learning(-0.01, 0.8), feasibility_error);
  CHECK_NOTHROW(StepSchedule::influence(0.9, 1.4));
  CHECK_NOTHROW(StepSchedule::influence(0.9, 0.8));
  CHECK_THROWS_AS(StepSchedule::influence(2.5, 1.0), feasibility_error);  // b(1) > 1

  const auto a = StepSchedule::learning(0.01, 2.0 / 3.0);
  CHECK(a(1) == doctest::Approx(0.01 / 2.0).epsilon(1e-15));
  CHECK(a(8) == doctest::Approx(0.01 / 5.0).epsilon(1e-15));
}

TEST_CASE("single-site estimate reduces to the cost term") {
  ModelSpec spec;
  spec.sites = 1;
  spec.topics = 2;
  spec.publishing = {0.5, 0.5};
  spec.reward = {60};
  spec.kappa = 2.5;
  spec.epsilon = 1.0;
  SessionOutcome outcome;
  outcome.site = 0;
  outcome.topic = 1;
  outcome.trials = 3;
  outcome.exposures = {0, 1};
  const auto g = gradient_estimate(spec, Strategy{{1.0}}, outcome);
  const double dc4 = std::pow(4.0, 2.5) - std::pow(3.0, 2.5);
  CHECK(g[0] == doctest::Approx(3.0 * dc4).epsilon(1e-12));
}

TEST_CASE("kappa = 0 estimate is the centered reward") {
  auto spec = preset_model({150, 125, 150, 400, 100});
  spec.kappa = 0.0;
  const Strategy x = uniform_strategy(spec);
  SessionOutcome outcome;
  outcome.site = 3;
  outcome.topic = 3;
  outcome.trials = 7;
  outcome.exposures = {0, 0, 0, 1};
  const auto g = gradient_estimate(spec, x, outcome);
  const auto rho = acceptance_probs(spec, x);
  double rbar = 0.0;
  for (std::size_t k = 0; k < 5; ++k) rbar += spec.reward[k] * x.x[k] * spec.p(k, 3);
  rbar /= rho[3];
  for (std::size_t m = 0; m < 5; ++m) {
    if (m == 3) CHECK(g[m] == doctest::Approx((400.0 - rbar) / 0.2).epsilon(1e-12));
    else CHECK(g[m] == 0.0);
  }
}

TEST_CASE("estimator is unbiased for grad F at uniform x") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  const auto bias =
      checks::estimator_bias(spec, uniform_strategy(spec), kThetaTable1, {}, 300'000, 2025);
  CHECK(bias.max_z <= 3.0);
}

TEST_CASE("estimator second moment is stable in the sample size") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  const Strategy x = uniform_strategy(spec);
  auto second_moment = [&](std::size_t k, std::uint64_t seed) {
    RngStream rng(seed);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto outcome = sample_session(spec, x, kThetaTable1, rng);
      const auto g = gradient_estimate(spec, x, outcome);
      acc += g[outcome.site] * g[outcome.site];
    }
    return acc / static_cast<double>(k);
  };
  const double at_k = second_moment(150'000, 8);
  const double at_2k = second_moment(300'000, 9);
  CHECK(std::isfinite(at_k));
  CHECK(std::abs(at_2k - at_k) / at_k < 0.2);
}

TEST_CASE("learner step is the projected ascent step") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  const Strategy x{{0.1, 0.2, 0.3, 0.25, 0.15}};
  SUBCASE("zero gradient leaves x unchanged") {
    const auto next = learner_step(spec, x, std::vector<double>(5, 0.0), 0.01);
    CHECK(next.x == x.x);
  }
  SUBCASE("zero step leaves x unchanged") {
    const auto next = learner_step(spec, x, std::vector<double>{1, 2, 3, 4, 5}, 0.0);
    CHECK(next.x == x.x);
  }
  SUBCASE("matches projection of the shifted point") {
    RngStream rng(14);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> g(5);
      for (auto& v : g) v = 40.0 * rng.uniform() - 20.0;
      const double a = rng.uniform();
      const auto step = learner_step(spec, x, g, a);
      std::vector<double> y(x.x);
      for (std::size_t j = 0; j < 5; ++j) y[j] += a * g[j];
      const auto oracle = checks::brute_force_projection(y, spec.epsilon);
      double dist = 0.0;
      for (std::size_t j = 0; j < 5; ++j)
        dist += (step.x[j] - oracle.x[j]) * (step.x[j] - oracle.x[j]);
      CHECK(std::sqrt(dist) <= 1e-7);
    }
  }
  SUBCASE("non-finite gradients are rejected") {
    std::vector<double> g(5, 0.0);
    g[2] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(learner_step(spec, x, g, 0.1), degenerate_error);
  }
}

TEST_CASE("learning run keeps every iterate feasible and is reproducible") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  LearnOptions opt;
  opt.sessions = 500;
  opt.seed = 21;
  opt.x_ref = Strategy{{0.01, 0.01, 0.01, 0.96, 0.01}};
  const auto trace = run_learning(spec, kThetaTable1, opt);
  REQUIRE(trace.records.size() == 500);
  for (const auto& rec : trace.records) {
    CHECK(is_feasible(spec, Strategy{rec.x}));
    REQUIRE(rec.err.has_value());
  }
  const auto again = run_learning(spec, kThetaTable1, opt);
  for (std::size_t i = 0; i < trace.records.size(); ++i)
    CHECK(trace.records[i].x == again.records[i].x);
}

TEST_CASE("trace decimation keeps every k-th record plus the last") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  LearnOptions opt;
  opt.sessions = 103;
  opt.decimate = 10;
  opt.seed = 2;
  opt.x0 = uniform_strategy(spec);
  const auto trace = run_learning(spec, kThetaTable1, opt);
  REQUIRE(trace.records.size() == 11);
  CHECK(trace.records.front().session == 10);
  CHECK(trace.records.back().session == 103);
}

TEST_CASE("learning trace CSV has the documented shape") {
  const auto spec = preset_model({150, 125, 150, 400, 100});
  LearnOptions opt;
  opt.sessions = 5;
  opt.seed = 3;
  opt.x0 = uniform_strategy(spec);
  const auto trace = run_learning(spec, kThetaTable1, opt);
  const auto csv = to_csv(trace);
  CHECK(csv.substr(0, csv.find('\n')) == "s,x_1,x_2,x_3,x_4,x_5,F,err");
  // err column empty without a reference: rows end with a comma
  const auto second_line_end = csv.find('\n', csv.find('\n') + 1);
  CHECK(csv[second_line_end - 1] == ',');
}

TEST_CASE("degenerate single-topic instance improves its objective") {
  ModelSpec spec;
  spec.sites = 3;
  spec.topics = 1;
  spec.publishing = {0.9, 0.3, 0.5};
  spec.reward = {50, 200, 90};
  spec.kappa = 1.5;
  spec.epsilon = 0.01;
  const InterestProfile theta{{1.0}};

  LearnOptions opt;
  opt.sessions = 4000;
  opt.schedule = StepSchedule::learning(0.01, 2.0 / 3.0);
  opt.seed = 6;
  const auto trace = run_learning(spec, theta, opt);

  double first = 0.0, last = 0.0;
  const std::size_t w = trace.records.size() / 5;
  for (std::size_t i = 0; i < w; ++i) first += trace.records[i].f;
  for (std::size_t i = trace.records.size() - w; i < trace.records.size(); ++i)
    last += trace.records[i].f;
  CHECK(last / w >= first / w - 1.0);

  // The static solver pins the target for this one-topic instance.
  SolveOptions sopt;
  sopt.starts = 4;
  sopt.seed = 1;
  const auto solved = solve_static(spec, theta, {}, sopt);
  const auto endpoint = window_mean_x(trace, 0.1);
  CHECK(net_at(spec, endpoint, theta.theta) >= solved.best_f - 25.0);
}
