#pragma once

#include "ltlmcts/sim/world.hpp"

namespace testing_support {

using namespace ltlmcts;

// Empty world holding only the agent, parked nowhere in particular.
inline sim::WorldState empty_world() {
  sim::ScenarioConfig cfg;
  cfg.seed = 1;
  cfg.n_vehicles = 0;
  return sim::spawn_scenario(cfg);
}

// Puts actor i with its footprint centre at (s, d) on `route`, aligned with the road.
inline void place(sim::WorldState& w, std::size_t i, sim::Route route, double s, double d, double v) {
  auto& a = w.actors[i];
  a.route = route;
  a.lane = w.env.nearest_lane(d);
  const auto rear = w.env.to_world(route, {s - 0.5 * w.params.wheelbase, d});
  a.vehicle = {};
  a.vehicle.p_x = rear.x;
  a.vehicle.p_y = rear.y;
  a.vehicle.theta = w.env.heading(route);
  a.vehicle.v = v;
}

inline std::size_t add_actor(sim::WorldState& w, sim::Route route, double s, double d, double v,
                             sim::Policy policy = sim::Policy::Scripted) {
  w.actors.emplace_back();
  w.actors.back().policy = policy;
  place(w, w.actors.size() - 1, route, s, d, v);
  return w.actors.size() - 1;
}

}  // namespace testing_support
