#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "swarm/engine.hpp"

namespace swarm {

inline constexpr int kScenarioSchemaVersion = 1;

/// Scenario document failed to parse or validate.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses and validates a scenario document (JSON). Unknown keys, missing
/// required keys and constraint violations throw ScenarioError.
SimConfig parse_scenario(const std::string& text);
SimConfig load_scenario(const std::filesystem::path& path);

/// Serialises every field; parse_scenario(scenario_to_json(c)) == c.
std::string scenario_to_json(const SimConfig& config);

/// Human-readable schema with units and defaults.
std::string scenario_schema();

}  // namespace swarm
