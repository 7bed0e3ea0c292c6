#pragma once

#include <filesystem>
#include <string>

#include "mecsim/orchestrator.hpp"

namespace mecsim {

/// Parses a `[section] key = value` run configuration into an
/// ExperimentConfig starting from the built-in defaults. `#` and `;` start
/// comments. Unknown sections or keys are errors.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

/// Emits the full key set with current values, suitable for load_config.
std::string dump_config(const ExperimentConfig& config);

}  // namespace mecsim
