#include "recsim/experiment.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "recsim/checks.hpp"
#include "recsim/learn.hpp"
#include "recsim/model.hpp"
#include "recsim/optimize.hpp"

namespace recsim {

namespace {

using nlohmann::json;

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

json vec_json(const std::vector<double>& v) { return json(v); }

LearnOptions learn_options(const ExperimentConfig& c, std::uint64_t seed) {
  LearnOptions opt;
  opt.sessions = c.sessions;
  opt.schedule = StepSchedule::learning(c.a0, c.a_exp);
  if (c.x0) opt.x0 = c.x0;
  else if (!c.x0_random) opt.x0 = uniform_strategy(c.model);
  if (c.x_ref) opt.x_ref = c.x_ref;
  opt.decimate = c.decimate;
  opt.seed = seed;
  opt.policy = c.policy;
  return opt;
}

CoupledOptions coupled_options(const ExperimentConfig& c, std::uint64_t seed, bool alternate) {
  CoupledOptions opt;
  opt.sessions = c.sessions;
  opt.a = StepSchedule::learning(alternate ? c.a2_0 : c.a0, alternate ? c.a2_exp : c.a_exp);
  opt.b = StepSchedule::influence(alternate ? c.b2_0 : c.b0, alternate ? c.b2_exp : c.b_exp);
  if (c.x0) opt.x0 = c.x0;
  if (c.theta0) opt.theta0 = c.theta0;
  opt.mode = c.coupled_mode;
  opt.decimate = c.decimate;
  opt.seed = seed;
  opt.policy = c.policy;
  return opt;
}

// Run one job per seed on `jobs` workers; results land in seed order.
template <typename Fn>
void for_each_seed(const std::vector<std::uint64_t>& seeds, std::size_t jobs, Fn work) {
  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, seeds.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        work(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

json run_static(const ExperimentConfig& c, std::string& report) {
  SolveOptions opt;
  opt.starts = c.starts;
  opt.max_iters = c.max_iters;
  opt.tol = c.tol;
  opt.seed = c.seeds.front();
  opt.jobs = c.jobs;
  SolveReport solved = solve_static(c.model, *c.theta, c.policy, opt);

  json j;
  j["best_x"] = vec_json(solved.best_x.x);
  j["best_F"] = solved.best_f;
  j["starts"] = solved.starts;
  json starts = json::array();
  for (const auto& s : solved.start_results)
    starts.push_back({{"F", s.f}, {"iterations", s.iterations}, {"converged", s.converged},
                      {"x", vec_json(s.x)}});
  j["start_results"] = starts;
  j["near_best_starts"] = solved.near_best;

  report += "static solve: best F = " + std::to_string(solved.best_f) + "\n";
  report += "best x =";
  for (double v : solved.best_x.x) report += " " + std::to_string(v);
  report += "\n";

  if (c.resolution > 0.0) {
    const GridResult oracle =
        c.fine_resolution > 0.0
            ? grid_refine(c.model, *c.theta, c.policy, c.resolution, c.fine_resolution)
            : grid_oracle(c.model, *c.theta, c.policy, c.resolution);
    solved.grid_gap = solved.best_f - oracle.f;
    j["oracle_F"] = oracle.f;
    j["oracle_x"] = vec_json(oracle.x.x);
    j["oracle_points"] = oracle.points;
    j["grid_gap"] = *solved.grid_gap;
    report += "grid oracle: F = " + std::to_string(oracle.f) +
              " (gap = " + std::to_string(*solved.grid_gap) + ")\n";
  }
  return j;
}

json run_learn(const ExperimentConfig& c, const std::filesystem::path& dir, std::string& report) {
  std::vector<json> per_seed(c.seeds.size());
  for_each_seed(c.seeds, c.jobs, [&](std::size_t i) {
    const auto seed = c.seeds[i];
    const LearnTrace trace = run_learning(c.model, *c.theta, learn_options(c, seed));
    write_file(dir / ("seed_" + std::to_string(seed) + ".csv"), to_csv(trace));
    json j;
    j["seed"] = seed;
    j["final_x"] = vec_json(trace.final_x.x);
    j["final_window_x"] = vec_json(window_mean_x(trace, 0.1));
    j["final_F"] = trace.records.back().f;
    if (trace.records.back().err) j["final_err"] = *trace.records.back().err;
    per_seed[i] = std::move(j);
  });
  json j;
  j["per_seed"] = per_seed;
  for (const auto& s : per_seed) {
    report += "seed " + s["seed"].dump() + ": final F = " + s["final_F"].dump();
    if (s.contains("final_err")) report += ", final ||x - x_ref|| = " + s["final_err"].dump();
    report += "\n";
  }
  return j;
}

json coupled_seed_summary(const ExperimentConfig& c, const CoupledTrace& trace,
                          std::uint64_t seed) {
  json j;
  j["seed"] = seed;
  j["final_x"] = vec_json(trace.final_x.x);
  j["final_theta"] = vec_json(trace.final_theta.theta);
  j["final_window_x"] = vec_json(window_mean_x(trace, 0.1));
  j["final_window_theta"] = vec_json(window_mean_theta(trace, 0.1));
  j["final_window_F"] = window_mean_f(trace, 0.1);
  return j;
}

json run_coupled_mode(const ExperimentConfig& c, const std::filesystem::path& dir,
                      std::string& report) {
  json j;
  std::vector<json> primary(c.seeds.size());
  std::vector<json> alternate(c.seeds.size());
  for_each_seed(c.seeds, c.jobs, [&](std::size_t i) {
    const auto seed = c.seeds[i];
    const CoupledTrace trace = run_coupled(c.model, *c.influence, coupled_options(c, seed, false));
    const std::string stem = "seed_" + std::to_string(seed);
    write_file(dir / (stem + (c.compare_timescales ? "_fast.csv" : ".csv")), to_csv(trace));
    primary[i] = coupled_seed_summary(c, trace, seed);
    if (c.compare_timescales) {
      const CoupledTrace other =
          run_coupled(c.model, *c.influence, coupled_options(c, seed, true));
      write_file(dir / (stem + "_slow.csv"), to_csv(other));
      alternate[i] = coupled_seed_summary(c, other, seed);
    }
  });
  j["per_seed"] = primary;
  for (const auto& s : primary)
    report += "seed " + s["seed"].dump() + ": final-window F = " + s["final_window_F"].dump() +
              ", theta = " + s["final_window_theta"].dump() + "\n";
  if (c.compare_timescales) {
    j["per_seed_alternate"] = alternate;
    std::size_t wins = 0;
    const std::size_t last = c.model.topics - 1;
    for (std::size_t i = 0; i < c.seeds.size(); ++i) {
      const double fast = primary[i]["final_window_theta"][last].get<double>();
      const double slow = alternate[i]["final_window_theta"][last].get<double>();
      wins += fast > slow ? 1 : 0;
    }
    j["timescale_ordering_wins"] = wins;
    j["timescale_ordering_total"] = c.seeds.size();
    report += "timescale ordering (fast theta_last > slow): " + std::to_string(wins) + "/" +
              std::to_string(c.seeds.size()) + " seeds\n";
  }
  return j;
}

json run_oracle(const ExperimentConfig& c, std::string& report) {
  const GridResult res =
      c.fine_resolution > 0.0
          ? grid_refine(c.model, *c.theta, c.policy, c.resolution, c.fine_resolution)
          : grid_oracle(c.model, *c.theta, c.policy, c.resolution);
  json j;
  j["oracle_F"] = res.f;
  j["oracle_x"] = vec_json(res.x.x);
  j["points"] = res.points;
  report += "grid oracle: F = " + std::to_string(res.f) + " over " + std::to_string(res.points) +
            " lattice points\n";
  return j;
}

json run_check(const ExperimentConfig& c, std::string& report) {
  const auto results = checks::run_battery(c.model, *c.theta, c.policy, c.seeds.front());
  json j;
  std::size_t passed = 0;
  json items = json::array();
  for (const auto& r : results) {
    items.push_back({{"name", r.name}, {"passed", r.passed}, {"value", r.value}, {"bound", r.bound}});
    passed += r.passed ? 1 : 0;
    report += std::string(r.passed ? "[pass] " : "[FAIL] ") + r.name +
              " (value " + std::to_string(r.value) + ")\n";
  }
  j["checks"] = items;
  j["passed"] = passed;
  j["failed"] = results.size() - passed;
  report += std::to_string(passed) + "/" + std::to_string(results.size()) + " checks passed\n";
  return j;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result;
  std::string out_dir = config.out_dir;
  if (const char* env = std::getenv("RECSIM_OUT"); env && *env) out_dir = env;
  result.out_dir = out_dir;
  std::filesystem::create_directories(result.out_dir);

  std::string report;
  report += "mode: " + std::string(to_string(config.mode)) + "\n";
  if (!config.preset.empty()) report += "preset: " + config.preset + "\n";
  if (config.influence)
    for (const auto& w : influence_warnings(*config.influence)) report += "warning: " + w + "\n";

  json summary;
  summary["mode"] = to_string(config.mode);
  if (!config.preset.empty()) summary["preset"] = config.preset;
  summary["seeds"] = config.seeds;

  switch (config.mode) {
    case ExperimentMode::static_solve:
      summary["result"] = run_static(config, report);
      break;
    case ExperimentMode::learn:
      summary["result"] = run_learn(config, result.out_dir, report);
      break;
    case ExperimentMode::coupled:
      summary["result"] = run_coupled_mode(config, result.out_dir, report);
      break;
    case ExperimentMode::oracle:
      summary["result"] = run_oracle(config, report);
      break;
    case ExperimentMode::check:
      summary["result"] = run_check(config, report);
      break;
  }

  result.summary_json = summary.dump(2) + "\n";
  result.report = report;
  write_file(result.out_dir / "summary.json", result.summary_json);
  write_file(result.out_dir / "report.txt", result.report);
  return result;
}

}  // namespace recsim
