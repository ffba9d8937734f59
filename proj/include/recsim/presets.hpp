#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recsim/config.hpp"

namespace recsim {

// Named experiment presets reproducing the numbered numerical claims:
//   table1, example2           static instances
//   exH3, exH4                 static instances (skewed interest variants)
//   fig1                       online learning run
//   fig2                       coupled Type-B, fast interest adaptation
//   fig3                       fig2 plus the paired slow-adaptation schedules
//   appJ-typeA-slow/-fast      coupled Type-A, slow/fast interest adaptation
//   appJ-typeB-slow/-fast      coupled Type-B variants
std::optional<ExperimentConfig> preset_config(std::string_view name);

std::vector<std::string> preset_names();

// The 5x4 publishing matrix shared by every preset, with the given rewards.
ModelSpec preset_model(std::vector<double> reward);

}  // namespace recsim
