#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltlmcts/bench/config_io.hpp"
#include "ltlmcts/planner/planner.hpp"
#include "ltlmcts/prior/prior.hpp"

namespace ltlmcts::bench {

enum class Environment { NoStoppedCar, StoppedCarAhead };
enum class LowLevel { ManualPolicy, OptionsMcts };

std::string_view to_string(Environment e);
std::string_view to_string(LowLevel l);

struct Variant {
  LowLevel low_level = LowLevel::OptionsMcts;
  std::string prior = "none";  // none, uniform, manual or learned:<path>

  std::string label() const;
};

struct ExperimentConfig {
  Environment environment = Environment::NoStoppedCar;
  std::vector<Variant> variants;
  int n_worlds = 100;
  std::vector<std::uint64_t> seeds;  // one per world
  RunSettings settings;
  Scenario base;  // road geometry, weights and gains shared by every world

  // Seeds 1..n_worlds.
  static std::vector<std::uint64_t> default_seeds(int n_worlds);
  void validate() const;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);

// Worlds carry seed % 6 other vehicles.
sim::ScenarioConfig world_for_seed(const ExperimentConfig& cfg, std::uint64_t seed);

enum class EpisodeOutcome { Success, Collision, ConstraintViolation, Timeout };

std::string_view to_string(EpisodeOutcome o);
EpisodeOutcome classify(sim::Status s);

struct EpisodeRecord {
  std::size_t variant = 0;
  std::size_t world = 0;
  std::uint64_t seed = 0;
  int n_vehicles = 0;
  EpisodeOutcome outcome = EpisodeOutcome::Timeout;
  double reward = 0.0;
  bool error = false;  // the episode threw; counted as a non-completion
  std::vector<planner::TraceRow> trace;
};

struct ResultRow {
  std::string variant;
  std::string low_level;
  std::string prior;
  std::string environment;
  int n_worlds = 0;
  int constraint_violations = 0;
  int collisions = 0;
  int total_failures = 0;
  double avg_reward = 0.0;
  double std_reward = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::vector<EpisodeRecord> episodes;  // variant-major, then world order
};

struct RunOptions {
  int jobs = 1;
  bool keep_traces = false;
};

// Runs the rules-following scripted controller as the agent.
planner::EpisodeResult manual_policy_run(const sim::WorldState& start, const features::RewardWeights& weights,
                                         const planner::EpisodeConfig& episode = {},
                                         const planner::Specification& spec = planner::road_rules());

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& run = {});

ResultRow aggregate(const ExperimentConfig& cfg, std::size_t variant, const std::vector<EpisodeRecord>& episodes);

struct SelfPlayConfig {
  std::vector<std::uint64_t> seeds;
  bool both_environments = true;
  RunSettings settings;
  Scenario base;
};

// Transitions from every search tree grown by uniform-prior planning in the
// given worlds.
prior::EpisodeDataset self_play(const SelfPlayConfig& cfg);

}  // namespace ltlmcts::bench
