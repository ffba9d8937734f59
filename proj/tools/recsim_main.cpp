#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "recsim/experiment.hpp"
#include "recsim/presets.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::string token;
  std::istringstream in(list);
  while (std::getline(in, token, ',')) {
    if (token.empty()) continue;
    seeds.push_back(std::stoull(token));
  }
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recsim: randomized website recommendation model -- static solver, "
               "online learner, and influence-coupled simulation"};

  std::string config_path;
  std::string preset_name;
  std::string seed_list;
  std::string out_dir;
  std::size_t jobs = 0;
  std::size_t decimate = 0;
  bool render_only = false;
  bool list_presets = false;

  app.add_option("--config", config_path, "experiment config file");
  app.add_option("--preset", preset_name, "named preset (see --list-presets)");
  app.add_option("--seeds", seed_list, "comma-separated seed list override");
  app.add_option("--out", out_dir, "output directory (RECSIM_OUT env overrides)");
  app.add_option("--jobs", jobs, "parallel worker slots for seeds/starts");
  app.add_option("--decimate", decimate, "record every k-th session in traces");
  app.add_flag("--render", render_only, "print the effective config and exit");
  app.add_flag("--list-presets", list_presets, "list preset names and exit");

  CLI11_PARSE(app, argc, argv);

  if (list_presets) {
    for (const auto& name : recsim::preset_names()) std::cout << name << "\n";
    return 0;
  }

  try {
    recsim::ExperimentConfig config;
    if (!preset_name.empty()) {
      auto preset = recsim::preset_config(preset_name);
      if (!preset) {
        std::cerr << "unknown preset: " << preset_name << "\n";
        return kExitConfig;
      }
      config = *preset;
    } else if (!config_path.empty()) {
      const auto parsed = recsim::parse_config(read_file(config_path));
      if (!parsed.config) {
        std::cerr << "config errors:\n";
        for (const auto& err : parsed.errors) std::cerr << "  - " << err << "\n";
        return kExitConfig;
      }
      config = *parsed.config;
    } else {
      std::cerr << "either --config or --preset is required\n";
      return kExitConfig;
    }

    if (!seed_list.empty()) config.seeds = parse_seed_list(seed_list);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (jobs > 0) config.jobs = jobs;
    if (decimate > 0) config.decimate = decimate;
    if (config.seeds.empty()) {
      std::cerr << "seed list is empty\n";
      return kExitConfig;
    }

    if (render_only) {
      std::cout << recsim::render_config(config);
      return 0;
    }

    const auto result = recsim::run_experiment(config);
    std::cout << result.report;
    std::cout << "artifacts written to " << result.out_dir.string() << "\n";
    return 0;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const recsim::error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}
