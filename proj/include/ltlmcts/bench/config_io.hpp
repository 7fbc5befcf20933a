#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ltlmcts/planner/planner.hpp"
#include "ltlmcts/sim/world.hpp"

namespace ltlmcts::bench {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Everything a scenario file describes: the spawn parameters plus the
// reward weights and option gains the planner should use in it.
struct Scenario {
  sim::ScenarioConfig spawn;
  features::RewardWeights weights;
  options::OptionsConfig options;
};

struct RunSettings {
  planner::PlannerConfig planner;
  planner::EpisodeConfig episode;
};

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);

// Overlays the keys present in `j` onto `base`.
RunSettings settings_from_json(const nlohmann::json& j, RunSettings base = {});
nlohmann::json to_json(const RunSettings& s);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace ltlmcts::bench
