#pragma once

// JSON config loading for the CLI. Unknown keys are hard errors: a silently
// ignored typo in a simulation config costs hours of compute.

#include <stdexcept>
#include <string>

#include "tq/link.hpp"
#include "tq/sweep.hpp"

namespace tq::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Accepts a built-in scenario name or a path to a scenario JSON file.
ScenarioSpec load_scenario(const std::string& name_or_path);

SweepConfig load_sweep_config(const std::string& path);

std::string describe(const ScenarioSpec& scenario);

}  // namespace tq::cli
