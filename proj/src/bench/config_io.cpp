#include "ltlmcts/bench/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

namespace ltlmcts::bench {

using nlohmann::json;

namespace {

void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <class T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(where) + "." + key + ": " + e.what());
  }
}

void read_positive(const json& j, const char* key, double& out, std::string_view where) {
  read(j, key, out, where);
  if (!(out > 0.0)) throw ConfigError(std::string(where) + "." + key + " must be positive");
}

features::RewardWeights weights_from_json(const json& j) {
  require_object(j, "reward_weights");
  reject_unknown(j, {"e_y", "e_theta", "underspeed", "overspeed", "accel", "jerk", "psi_dot"}, "reward_weights");
  features::RewardWeights w;
  read(j, "e_y", w.e_y, "reward_weights");
  read(j, "e_theta", w.e_theta, "reward_weights");
  read(j, "underspeed", w.underspeed, "reward_weights");
  read(j, "overspeed", w.overspeed, "reward_weights");
  read(j, "accel", w.accel, "reward_weights");
  read(j, "jerk", w.jerk, "reward_weights");
  read(j, "psi_dot", w.psi_dot, "reward_weights");
  for (double d : w.diagonal()) {
    if (!(d >= 0.0)) throw ConfigError("reward_weights must be non-negative");
  }
  return w;
}

json to_json(const features::RewardWeights& w) {
  return {{"e_y", w.e_y},       {"e_theta", w.e_theta}, {"underspeed", w.underspeed},
          {"overspeed", w.overspeed}, {"accel", w.accel}, {"jerk", w.jerk},
          {"psi_dot", w.psi_dot}};
}

options::OptionsConfig options_from_json(const json& j) {
  constexpr std::string_view where = "options";
  require_object(j, where);
  reject_unknown(j,
                 {"k_y", "k_theta", "k_psi", "max_approach", "a_lat_max", "k_v", "max_duration",
                  "wait_max_duration", "follow_range", "pass_margin", "stop_bonus", "wait_bonus",
                  "pass_bonus"},
                 where);
  options::OptionsConfig c;
  read_positive(j, "k_y", c.lateral.k_y, where);
  read_positive(j, "k_theta", c.lateral.k_theta, where);
  read_positive(j, "k_psi", c.lateral.k_psi, where);
  read_positive(j, "max_approach", c.lateral.max_approach, where);
  read_positive(j, "a_lat_max", c.lateral.a_lat_max, where);
  read_positive(j, "k_v", c.k_v, where);
  read_positive(j, "max_duration", c.max_duration, where);
  read_positive(j, "wait_max_duration", c.wait_max_duration, where);
  read_positive(j, "follow_range", c.follow_range, where);
  read_positive(j, "pass_margin", c.pass_margin, where);
  read(j, "stop_bonus", c.stop_bonus, where);
  read(j, "wait_bonus", c.wait_bonus, where);
  read(j, "pass_bonus", c.pass_bonus, where);
  return c;
}

json to_json(const options::OptionsConfig& c) {
  return {{"k_y", c.lateral.k_y},
          {"k_theta", c.lateral.k_theta},
          {"k_psi", c.lateral.k_psi},
          {"max_approach", c.lateral.max_approach},
          {"a_lat_max", c.lateral.a_lat_max},
          {"k_v", c.k_v},
          {"max_duration", c.max_duration},
          {"wait_max_duration", c.wait_max_duration},
          {"follow_range", c.follow_range},
          {"pass_margin", c.pass_margin},
          {"stop_bonus", c.stop_bonus},
          {"wait_bonus", c.wait_bonus},
          {"pass_bonus", c.pass_bonus}};
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  constexpr std::string_view where = "scenario";
  require_object(j, where);
  reject_unknown(j,
                 {"seed", "n_vehicles", "stopped_car", "speed_limit_mps", "lane_width_m",
                  "segment_length_m", "dt", "reward_weights", "options"},
                 where);
  Scenario s;
  read(j, "seed", s.spawn.seed, where);
  read(j, "n_vehicles", s.spawn.n_vehicles, where);
  read(j, "stopped_car", s.spawn.stopped_car, where);
  read_positive(j, "speed_limit_mps", s.spawn.env.speed_limit, where);
  read_positive(j, "lane_width_m", s.spawn.env.lane_width, where);
  read_positive(j, "segment_length_m", s.spawn.env.segment_length, where);
  read_positive(j, "dt", s.spawn.dt, where);
  if (s.spawn.n_vehicles < 0 || s.spawn.n_vehicles > 5) throw ConfigError("scenario.n_vehicles must be in 0..5");
  if (j.contains("reward_weights")) s.weights = weights_from_json(j.at("reward_weights"));
  if (j.contains("options")) s.options = options_from_json(j.at("options"));
  return s;
}

json to_json(const Scenario& s) {
  return {{"seed", s.spawn.seed},
          {"n_vehicles", s.spawn.n_vehicles},
          {"stopped_car", s.spawn.stopped_car},
          {"speed_limit_mps", s.spawn.env.speed_limit},
          {"lane_width_m", s.spawn.env.lane_width},
          {"segment_length_m", s.spawn.env.segment_length},
          {"dt", s.spawn.dt},
          {"reward_weights", to_json(s.weights)},
          {"options", to_json(s.options)}};
}

RunSettings settings_from_json(const json& j, RunSettings base) {
  constexpr std::string_view where = "planner";
  require_object(j, where);
  reject_unknown(j,
                 {"iterations", "horizon_s", "exploration", "value_scale", "widening",
                  "rollout_options", "seed", "replan_period_s", "timeout_s"},
                 where);
  auto& p = base.planner;
  read(j, "iterations", p.iterations, where);
  read(j, "horizon_s", p.horizon, where);
  read(j, "exploration", p.exploration, where);
  read(j, "value_scale", p.value_scale, where);
  read(j, "widening", p.widening, where);
  read(j, "rollout_options", p.rollout_options, where);
  read(j, "seed", p.seed, where);
  read_positive(j, "replan_period_s", base.episode.replan_period, where);
  read_positive(j, "timeout_s", base.episode.timeout, where);
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("planner: ") + e.what());
  }
  return base;
}

json to_json(const RunSettings& s) {
  const auto& p = s.planner;
  return {{"iterations", p.iterations},
          {"horizon_s", p.horizon},
          {"exploration", p.exploration},
          {"value_scale", p.value_scale},
          {"widening", p.widening},
          {"rollout_options", p.rollout_options},
          {"seed", p.seed},
          {"replan_period_s", s.episode.replan_period},
          {"timeout_s", s.episode.timeout}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace ltlmcts::bench
