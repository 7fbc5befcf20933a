#include "ltlmcts/bench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include <spdlog/spdlog.h>

#include "ltlmcts/features/reward.hpp"

namespace ltlmcts::bench {

using nlohmann::json;

std::string_view to_string(Environment e) {
  return e == Environment::NoStoppedCar ? "NO_STOPPED_CAR" : "STOPPED_CAR_AHEAD";
}

std::string_view to_string(LowLevel l) {
  return l == LowLevel::ManualPolicy ? "manual_policy" : "options_mcts";
}

std::string_view to_string(EpisodeOutcome o) {
  switch (o) {
    case EpisodeOutcome::Success: return "success";
    case EpisodeOutcome::Collision: return "collision";
    case EpisodeOutcome::ConstraintViolation: return "constraint_violation";
    case EpisodeOutcome::Timeout: return "timeout";
  }
  return "timeout";
}

EpisodeOutcome classify(sim::Status s) {
  switch (s) {
    case sim::Status::GoalReached: return EpisodeOutcome::Success;
    case sim::Status::Collided: return EpisodeOutcome::Collision;
    case sim::Status::ConstraintViolated: return EpisodeOutcome::ConstraintViolation;
    case sim::Status::Running:
    case sim::Status::Timeout: return EpisodeOutcome::Timeout;
  }
  return EpisodeOutcome::Timeout;
}

std::string Variant::label() const {
  std::string p = prior;
  if (p.starts_with("learned:")) p = "learned";
  return std::string(to_string(low_level)) + "/" + p;
}

std::vector<std::uint64_t> ExperimentConfig::default_seeds(int n_worlds) {
  std::vector<std::uint64_t> seeds;
  for (int i = 1; i <= n_worlds; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
  return seeds;
}

void ExperimentConfig::validate() const {
  if (variants.empty()) throw ConfigError("experiment needs at least one variant");
  if (n_worlds < 1) throw ConfigError("n_worlds must be at least 1");
  if (seeds.size() != static_cast<std::size_t>(n_worlds)) {
    throw ConfigError("seeds must list exactly n_worlds entries");
  }
  for (const auto& v : variants) {
    if (v.low_level == LowLevel::ManualPolicy && v.prior != "none") {
      throw ConfigError("the manual policy takes no prior");
    }
    if (v.low_level == LowLevel::OptionsMcts && v.prior == "none") {
      throw ConfigError("options_mcts needs a prior: uniform, manual or learned:<path>");
    }
  }
  try {
    settings.planner.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig experiment_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("experiment: expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "environment" && key != "variants" && key != "n_worlds" && key != "seeds" &&
        key != "planner" && key != "scenario") {
      throw ConfigError("experiment: unknown key '" + key + "'");
    }
  }
  ExperimentConfig cfg;
  try {
    const auto env = j.value("environment", std::string("NO_STOPPED_CAR"));
    if (env == "NO_STOPPED_CAR") {
      cfg.environment = Environment::NoStoppedCar;
    } else if (env == "STOPPED_CAR_AHEAD" || env == "STOPPED_CAR") {
      cfg.environment = Environment::StoppedCarAhead;
    } else {
      throw ConfigError("experiment.environment: unknown variant '" + env + "'");
    }
    for (const auto& v : j.at("variants")) {
      Variant var;
      const auto low = v.at("low_level").get<std::string>();
      if (low == "manual_policy") {
        var.low_level = LowLevel::ManualPolicy;
      } else if (low == "options_mcts") {
        var.low_level = LowLevel::OptionsMcts;
      } else {
        throw ConfigError("experiment.variants: unknown low_level '" + low + "'");
      }
      var.prior = v.value("prior", std::string("none"));
      cfg.variants.push_back(var);
    }
    cfg.n_worlds = j.value("n_worlds", 100);
    if (j.contains("seeds")) {
      cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    } else {
      cfg.seeds = ExperimentConfig::default_seeds(cfg.n_worlds);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment: ") + e.what());
  }
  if (j.contains("scenario")) cfg.base = scenario_from_json(j.at("scenario"));
  cfg.settings.planner.options = cfg.base.options;
  cfg.settings.planner.weights = cfg.base.weights;
  if (j.contains("planner")) cfg.settings = settings_from_json(j.at("planner"), cfg.settings);
  cfg.validate();
  return cfg;
}

sim::ScenarioConfig world_for_seed(const ExperimentConfig& cfg, std::uint64_t seed) {
  sim::ScenarioConfig sc = cfg.base.spawn;
  sc.seed = seed;
  sc.n_vehicles = static_cast<int>(seed % 6);
  sc.stopped_car = cfg.environment == Environment::StoppedCarAhead;
  return sc;
}

planner::EpisodeResult manual_policy_run(const sim::WorldState& start, const features::RewardWeights& weights,
                                         const planner::EpisodeConfig& episode,
                                         const planner::Specification& spec) {
  planner::EpisodeResult out;
  sim::WorldState w = start;
  auto monitors = planner::initial_monitor_states(spec, sim::label(w, 0));
  out.agent_labels.push_back(sim::label(w, 0));
  if (episode.record_trace) planner::append_trace(out.trace, w);
  sim::Control prev{};
  while (w.status == sim::Status::Running) {
    auto& agent = w.actors[0];
    if (sim::is_waiting(w, 0) && !agent.committed && agent.vehicle.v < sim::kStoppedSpeed &&
        sim::higher_priority(w, 0) && sim::intersection_is_clear(w, 0)) {
      agent.committed = true;
    }
    const auto u = sim::scripted_actor_control(w, 0);
    out.reward += features::step_reward(w, u, prev, weights);
    w = sim::advance_world(w, u);
    prev = u;
    const auto l = sim::label(w, 0);
    monitors.feed(spec, l);
    out.agent_labels.push_back(l);
    if (episode.record_trace) planner::append_trace(out.trace, w);
    if (w.status == sim::Status::Running && monitors.violated(spec)) w.status = sim::Status::ConstraintViolated;
    if (w.status == sim::Status::Running && w.time() - start.time() >= episode.timeout - 1e-9) {
      w.status = sim::Status::Timeout;
    }
  }
  out.status = w.status;
  out.collided = w.status == sim::Status::Collided;
  out.violated = monitors.violated(spec);
  out.goals = features::achieved_goals(w);
  out.reward += features::terminal_reward(w.status, out.goals);
  return out;
}

ResultRow aggregate(const ExperimentConfig& cfg, std::size_t variant, const std::vector<EpisodeRecord>& episodes) {
  const auto& v = cfg.variants.at(variant);
  ResultRow row;
  row.variant = v.label();
  row.low_level = std::string(to_string(v.low_level));
  row.prior = v.prior.starts_with("learned:") ? "learned" : v.prior;
  row.environment = std::string(to_string(cfg.environment));
  std::vector<double> rewards;
  for (const auto& e : episodes) {
    if (e.variant != variant) continue;
    ++row.n_worlds;
    rewards.push_back(e.reward);
    if (e.outcome == EpisodeOutcome::Collision) ++row.collisions;
    if (e.outcome == EpisodeOutcome::ConstraintViolation) ++row.constraint_violations;
    if (e.outcome != EpisodeOutcome::Success) ++row.total_failures;
  }
  if (rewards.empty()) return row;
  double sum = 0.0;
  for (double r : rewards) sum += r;
  row.avg_reward = sum / static_cast<double>(rewards.size());
  if (rewards.size() > 1) {
    double ss = 0.0;
    for (double r : rewards) ss += (r - row.avg_reward) * (r - row.avg_reward);
    row.std_reward = std::sqrt(ss / static_cast<double>(rewards.size() - 1));
  }
  return row;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& run) {
  cfg.validate();
  std::vector<std::optional<prior::OptionPrior>> priors;
  for (const auto& v : cfg.variants) {
    if (v.low_level == LowLevel::OptionsMcts) {
      priors.emplace_back(prior::prior_from_spec(v.prior));
    } else {
      priors.emplace_back();
    }
  }

  const std::size_t worlds = cfg.seeds.size();
  ExperimentResult result;
  result.episodes.resize(cfg.variants.size() * worlds);
  planner::EpisodeConfig episode = cfg.settings.episode;
  episode.record_trace = run.keep_traces;

  auto run_one = [&](std::size_t index) {
    EpisodeRecord& rec = result.episodes[index];
    rec.variant = index / worlds;
    rec.world = index % worlds;
    rec.seed = cfg.seeds[rec.world];
    const auto sc = world_for_seed(cfg, rec.seed);
    rec.n_vehicles = sc.n_vehicles;
    try {
      const auto start = sim::spawn_scenario(sc);
      planner::EpisodeResult ep;
      if (priors[rec.variant]) {
        planner::PlannerConfig pc = cfg.settings.planner;
        pc.seed = cfg.settings.planner.seed ^ rec.seed;
        ep = planner::receding_horizon_run(start, pc, *priors[rec.variant], episode);
      } else {
        ep = manual_policy_run(start, cfg.settings.planner.weights, episode);
      }
      rec.outcome = classify(ep.status);
      rec.reward = ep.reward;
      rec.trace = std::move(ep.trace);
    } catch (const std::exception& e) {
      spdlog::error("{} seed {}: {}", cfg.variants[rec.variant].label(), rec.seed, e.what());
      rec.error = true;
      rec.outcome = EpisodeOutcome::Timeout;
      rec.reward = features::terminal_reward(sim::Status::Timeout, {});
    }
  };

  const int jobs = std::max(1, run.jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < result.episodes.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < result.episodes.size(); i = next++) run_one(i);
      });
    }
  }

  for (std::size_t v = 0; v < cfg.variants.size(); ++v) result.rows.push_back(aggregate(cfg, v, result.episodes));
  return result;
}

prior::EpisodeDataset self_play(const SelfPlayConfig& cfg) {
  prior::EpisodeDataset data;
  planner::PlannerConfig pc = cfg.settings.planner;
  pc.options = cfg.base.options;
  pc.weights = cfg.base.weights;
  planner::EpisodeConfig episode = cfg.settings.episode;
  episode.record_trace = false;
  const auto uniform = prior::OptionPrior::uniform();
  for (auto seed : cfg.seeds) {
    for (int stopped = 0; stopped < (cfg.both_environments ? 2 : 1); ++stopped) {
      sim::ScenarioConfig sc = cfg.base.spawn;
      sc.seed = seed;
      sc.n_vehicles = static_cast<int>(seed % 6);
      sc.stopped_car = stopped == 1;
      pc.seed = cfg.settings.planner.seed ^ seed;
      planner::receding_horizon_run(sim::spawn_scenario(sc), pc, uniform, episode,
                                    [&](const planner::SearchResult& r) {
                                      planner::collect_transitions(r.tree, pc.options, data);
                                    });
    }
  }
  return data;
}

}  // namespace ltlmcts::bench
