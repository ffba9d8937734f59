#include "recsim/presets.hpp"

namespace recsim {

ModelSpec preset_model(std::vector<double> reward) {
  ModelSpec spec;
  spec.sites = 5;
  spec.topics = 4;
  spec.publishing = {
      0.25, 0.25, 0.25, 0.25,  //
      0.25, 0.25, 0.25, 0.25,  //
      0.10, 0.40, 0.45, 0.05,  //
      0.10, 0.05, 0.15, 0.70,  //
      0.65, 0.10, 0.20, 0.05,  //
  };
  spec.reward = std::move(reward);
  spec.kappa = 2.5;
  spec.epsilon = 0.01;
  return spec;
}

namespace {

const std::vector<double> kRewardBase = {150, 125, 150, 400, 100};

std::vector<std::uint64_t> ten_seeds() {
  std::vector<std::uint64_t> s(10);
  for (std::size_t i = 0; i < 10; ++i) s[i] = i + 1;
  return s;
}

InfluenceSpec make_influence(InfluenceType type, std::vector<double> xi, double beta) {
  InfluenceSpec inf;
  inf.topics.resize(xi.size());
  for (std::size_t n = 0; n < xi.size(); ++n) inf.topics[n] = {type, xi[n], beta};
  return inf;
}

ExperimentConfig static_preset(std::vector<double> reward, std::vector<double> theta) {
  ExperimentConfig c;
  c.mode = ExperimentMode::static_solve;
  c.model = preset_model(std::move(reward));
  c.theta = InterestProfile{std::move(theta)};
  c.starts = 8;
  c.resolution = 0.05;
  c.fine_resolution = 0.01;
  return c;
}

ExperimentConfig coupled_preset(InfluenceType type, std::vector<double> xi, double a0,
                                double a_exp, double b0, double b_exp, std::size_t sessions) {
  ExperimentConfig c;
  c.mode = ExperimentMode::coupled;
  c.model = preset_model(kRewardBase);
  c.influence = make_influence(type, std::move(xi), 3.0);
  c.a0 = a0;
  c.a_exp = a_exp;
  c.b0 = b0;
  c.b_exp = b_exp;
  c.sessions = sessions;
  c.seeds = ten_seeds();
  c.decimate = 10;
  return c;
}

}  // namespace

std::optional<ExperimentConfig> preset_config(std::string_view name) {
  if (name == "table1") {
    auto c = static_preset(kRewardBase, {0.03, 0.05, 0.02, 0.9});
    c.preset = "table1";
    return c;
  }
  if (name == "example2") {
    auto c = static_preset({400, 125, 150, 150, 100}, {0.03, 0.05, 0.02, 0.9});
    c.preset = "example2";
    return c;
  }
  if (name == "exH3") {
    auto c = static_preset(kRewardBase, {0.1, 0.05, 0.25, 0.6});
    c.preset = "exH3";
    return c;
  }
  if (name == "exH4") {
    auto c = static_preset(kRewardBase, {0.9, 0.05, 0.02, 0.03});
    c.preset = "exH4";
    return c;
  }
  if (name == "fig1") {
    ExperimentConfig c;
    c.mode = ExperimentMode::learn;
    c.model = preset_model(kRewardBase);
    c.theta = InterestProfile{{0.03, 0.05, 0.02, 0.9}};
    c.a0 = 0.01;
    c.a_exp = 2.0 / 3.0;
    c.sessions = 20'000;
    c.seeds = ten_seeds();
    c.x0_random = true;
    c.x_ref = Strategy{{0.01, 0.01, 0.01, 0.96, 0.01}};
    c.decimate = 10;
    c.preset = "fig1";
    return c;
  }
  if (name == "fig2") {
    auto c = coupled_preset(InfluenceType::type_b, {0.03, 0.05, 0.02, 0.9},
                            0.1, 1.0, 0.5, 0.6, 20'000);
    c.preset = "fig2";
    return c;
  }
  if (name == "fig3") {
    // Paired timescales: (a,b) with b/a -> inf versus (a2,b2) with b/a -> 0.
    auto c = coupled_preset(InfluenceType::type_b, {0.03, 0.05, 0.02, 0.9},
                            0.1, 1.0, 0.5, 0.6, 5'000);
    c.compare_timescales = true;
    c.a2_0 = 0.1;
    c.a2_exp = 0.6;
    c.b2_0 = 0.5;
    c.b2_exp = 1.0;
    c.decimate = 1;
    c.preset = "fig3";
    return c;
  }
  // The appJ schedules move x very slowly (a = 0.001/(1+s)); steady-state
  // readouts need long horizons.
  if (name == "appJ-typeA-slow") {
    auto c = coupled_preset(InfluenceType::type_a, {0.1, 0.05, 0.25, 0.6},
                            0.001, 1.0, 0.9, 1.4, 400'000);
    c.decimate = 50;
    c.preset = "appJ-typeA-slow";
    return c;
  }
  if (name == "appJ-typeB-slow") {
    auto c = coupled_preset(InfluenceType::type_b, {0.1, 0.05, 0.25, 0.6},
                            0.001, 1.0, 0.9, 1.4, 400'000);
    c.decimate = 50;
    c.preset = "appJ-typeB-slow";
    return c;
  }
  if (name == "appJ-typeA-fast") {
    auto c = coupled_preset(InfluenceType::type_a, {0.1, 0.05, 0.25, 0.6},
                            0.001, 1.0, 0.9, 0.8, 400'000);
    c.decimate = 50;
    c.preset = "appJ-typeA-fast";
    return c;
  }
  if (name == "appJ-typeB-fast") {
    auto c = coupled_preset(InfluenceType::type_b, {0.1, 0.05, 0.25, 0.6},
                            0.001, 1.0, 0.9, 0.8, 400'000);
    c.decimate = 50;
    c.preset = "appJ-typeB-fast";
    return c;
  }
  return std::nullopt;
}

std::vector<std::string> preset_names() {
  return {"table1", "example2", "exH3",           "exH4",
          "fig1",   "fig2",     "fig3",           "appJ-typeA-slow",
          "appJ-typeB-slow",    "appJ-typeA-fast", "appJ-typeB-fast"};
}

}  // namespace recsim
