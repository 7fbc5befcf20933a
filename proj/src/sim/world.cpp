#include "ltlmcts/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "ltlmcts/util/random.hpp"

namespace ltlmcts::sim {

namespace {

constexpr double kSpeedGain = 1.0;
constexpr double kScriptedAccelMax = 1.0;
constexpr double kScriptedBrakeMax = 2.0;

auto priority_key(const WorldState& w, std::size_t i) {
  const auto& a = w.actors[i];
  return std::make_tuple(-a.waited_steps, static_cast<int>(approach_of(a.route)), a.lane, i);
}

}  // namespace

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Running: return "running";
    case Status::Collided: return "collided";
    case Status::ConstraintViolated: return "constraint_violated";
    case Status::GoalReached: return "goal_reached";
    case Status::Timeout: return "timeout";
  }
  return "unknown";
}

const ltl::Alphabet& world_alphabet() {
  static const ltl::Alphabet ap{"not_in_stop_region",  "has_entered_stop_region",
                                "has_stopped_in_stop_region", "in_stop_region",
                                "in_intersection",     "over_speed_limit",
                                "on_route",            "intersection_is_clear",
                                "higher_priority"};
  return ap;
}

bool active(const WorldState& w, std::size_t i) { return !w.actors[i].exited; }

double lateral_extent(const VehicleParams& p, double heading_error) {
  return 0.5 * p.width * std::abs(std::cos(heading_error)) +
         0.5 * p.length * std::abs(std::sin(heading_error));
}

Frenet frenet_of(const WorldState& w, std::size_t i) {
  const auto& a = w.actors[i];
  return w.env.to_frenet(a.route, footprint_center(a.vehicle, w.params));
}

OrientedBox footprint_of(const WorldState& w, std::size_t i) {
  return footprint(w.actors[i].vehicle, w.params);
}

bool in_stop_region(const WorldState& w, std::size_t i) {
  const Frenet f = frenet_of(w, i);
  return f.s >= w.env.stop_begin() && f.s <= w.env.stop_end() && std::abs(f.d) <= w.env.half_width();
}

bool in_intersection(const WorldState& w, std::size_t i) {
  return overlaps(footprint_of(w, i), w.env.intersection_box());
}

bool needs_stop(const WorldState& w, std::size_t i) {
  return !w.actors[i].has_stopped_in_stop_region && frenet_of(w, i).s < w.env.stop_end();
}

double front_s(const WorldState& w, std::size_t i) {
  return frenet_of(w, i).s + 0.5 * w.params.length;
}

double reference_speed(const WorldState& w, std::size_t i) {
  return w.env.reference_speed(front_s(w, i), needs_stop(w, i));
}

bool is_waiting(const WorldState& w, std::size_t i) {
  const auto& a = w.actors[i];
  return !a.exited && a.policy != Policy::Parked && a.has_stopped_in_stop_region && !a.cleared;
}

bool higher_priority(const WorldState& w, std::size_t i) {
  const auto mine = priority_key(w, i);
  for (std::size_t j = 0; j < w.actors.size(); ++j) {
    if (j == i || !is_waiting(w, j)) continue;
    if (priority_key(w, j) < mine) return false;
  }
  return true;
}

bool intersection_is_clear(const WorldState& w, std::size_t i) {
  const OrientedBox box = w.env.intersection_box();
  for (std::size_t j = 0; j < w.actors.size(); ++j) {
    if (j == i || !active(w, j)) continue;
    if (overlaps(footprint_of(w, j), box)) return false;
  }
  return true;
}

ltl::Label label(const WorldState& w, std::size_t i) {
  const auto& a = w.actors[i];
  const Frenet f = frenet_of(w, i);
  const double heading_error = wrap_angle(a.vehicle.theta - w.env.heading(a.route));
  const bool stop = in_stop_region(w, i);
  ltl::Label l;
  auto put = [&](Predicate p, bool v) { l.set(static_cast<std::size_t>(p), v); };
  put(Predicate::NotInStopRegion, !stop);
  put(Predicate::HasEnteredStopRegion, a.has_entered_stop_region);
  put(Predicate::HasStoppedInStopRegion, a.has_stopped_in_stop_region);
  put(Predicate::InStopRegion, stop);
  put(Predicate::InIntersection, in_intersection(w, i));
  put(Predicate::OverSpeedLimit, a.vehicle.v > w.env.speed_limit);
  put(Predicate::OnRoute, std::abs(f.d) <= w.env.half_width() && std::cos(heading_error) > 0.0);
  put(Predicate::IntersectionIsClear, intersection_is_clear(w, i));
  put(Predicate::HigherPriority, higher_priority(w, i));
  return l;
}

std::optional<LeaderInfo> leader_in_band(const WorldState& w, std::size_t i, double d_lo, double d_hi) {
  const auto& me = w.actors[i];
  const Frenet fi = frenet_of(w, i);
  std::optional<LeaderInfo> best;
  for (std::size_t j = 0; j < w.actors.size(); ++j) {
    if (j == i || !active(w, j)) continue;
    const auto& other = w.actors[j];
    if (other.route != me.route) continue;
    const Frenet fj = frenet_of(w, j);
    if (fj.s <= fi.s) continue;
    const double reach = lateral_extent(w.params, wrap_angle(other.vehicle.theta - w.env.heading(other.route)));
    if (fj.d + reach <= d_lo || fj.d - reach >= d_hi) continue;
    const double gap = fj.s - fi.s - w.params.length;
    if (!best || gap < best->gap) best = LeaderInfo{j, gap, other.vehicle.v};
  }
  return best;
}

std::optional<LeaderInfo> leader_in_lane(const WorldState& w, std::size_t i, int lane) {
  const double c = w.env.lane_center(lane);
  const double h = 0.5 * w.env.lane_width;
  return leader_in_band(w, i, c - h, c + h);
}

double steer_to_offset(const WorldState& w, std::size_t i, double target_d, const LateralGains& g) {
  const auto& a = w.actors[i];
  const Frenet f = frenet_of(w, i);
  const double e_y = f.d - target_d;
  const double e_theta = wrap_angle(a.vehicle.theta - w.env.heading(a.route));
  const double v = std::max(a.vehicle.v, 1.0);
  const double theta_des = -std::atan(g.k_y * e_y / v);
  const double approach = std::clamp(theta_des, -g.max_approach, g.max_approach);
  const double rate_cap = g.a_lat_max / v;
  const double yaw_rate = std::clamp(g.k_theta * (approach - e_theta), -rate_cap, rate_cap);
  const double kappa = yaw_rate / v;
  const double psi_des =
      std::clamp(std::atan(w.params.wheelbase * kappa), -w.params.psi_max, w.params.psi_max);
  return std::clamp(g.k_psi * (psi_des - a.vehicle.psi), -w.params.psi_dot_max,
                    w.params.psi_dot_max);
}

double gap_speed(const RoadEnvironment& env, double gap, double v_lead, double follow_distance) {
  return std::sqrt(std::max(0.0, v_lead * v_lead + 2.0 * env.comfort_decel * (gap - follow_distance)));
}

Control scripted_actor_control(const WorldState& w, std::size_t i) {
  const auto& a = w.actors[i];
  if (a.policy == Policy::Parked || a.exited) return {};
  const double v = a.vehicle.v;
  const double steer = steer_to_offset(w, i, w.env.lane_center(a.lane));

  double target = w.env.speed_limit;
  double feed_forward = 0.0;
  if (needs_stop(w, i)) {
    const double remaining = w.env.stop_mid() - front_s(w, i);
    if (remaining > 0.0) {
      const double curve = std::sqrt(2.0 * w.env.comfort_decel * remaining);
      if (curve < target) {
        target = curve;
        feed_forward = -w.env.comfort_decel * std::min(1.0, v / std::max(curve, 1e-6));
      }
    } else {
      target = 0.0;
    }
  } else if (a.has_stopped_in_stop_region && !a.committed) {
    target = 0.0;
  }
  if (const auto lead = leader_in_lane(w, i, a.lane)) {
    const double follow = gap_speed(w.env, lead->gap, lead->v);
    if (follow < target) {
      target = follow;
      feed_forward = 0.0;
    }
  }
  if (target <= 0.0 && v < kStoppedSpeed) return {std::max(-kScriptedBrakeMax, -v / w.dt), steer};
  const double accel =
      std::clamp(kSpeedGain * (target - v) + feed_forward, -kScriptedBrakeMax, kScriptedAccelMax);
  return {accel, steer};
}

bool collided(const WorldState& w) {
  for (std::size_t i = 0; i < w.actors.size(); ++i) {
    if (!active(w, i)) continue;
    const OrientedBox bi = footprint_of(w, i);
    for (std::size_t j = i + 1; j < w.actors.size(); ++j) {
      if (active(w, j) && overlaps(bi, footprint_of(w, j))) return true;
    }
  }
  return false;
}

WorldState advance_world(const WorldState& w, Control planner_control) {
  if (w.status != Status::Running) throw ContractViolation("advance_world on a finished episode");
  WorldState n = w;
  for (std::size_t i = 0; i < n.actors.size(); ++i) {
    auto& a = n.actors[i];
    if (a.policy != Policy::Scripted || !is_waiting(w, i) || a.committed) continue;
    if (a.vehicle.v < kStoppedSpeed && higher_priority(w, i) && intersection_is_clear(w, i)) {
      a.committed = true;
    }
  }

  std::vector<Control> controls(n.actors.size());
  for (std::size_t i = 0; i < n.actors.size(); ++i) {
    if (!active(n, i)) continue;
    controls[i] = n.actors[i].policy == Policy::Planner ? planner_control
                                                         : scripted_actor_control(n, i);
  }
  for (std::size_t i = 0; i < n.actors.size(); ++i) {
    if (!active(n, i)) continue;
    n.actors[i].vehicle = step_vehicle(n.actors[i].vehicle, controls[i], n.dt, n.params);
  }
  ++n.step;

  const double clear_s = n.env.box_end() + 0.5 * n.params.length;
  for (std::size_t i = 0; i < n.actors.size(); ++i) {
    if (!active(n, i)) continue;
    auto& a = n.actors[i];
    const Frenet f = frenet_of(n, i);
    if (in_stop_region(n, i)) {
      a.has_entered_stop_region = true;
      if (a.vehicle.v < kStoppedSpeed) a.has_stopped_in_stop_region = true;
    }
    if (f.s >= clear_s) a.cleared = true;
    if (a.has_stopped_in_stop_region && !a.cleared) ++a.waited_steps;
    if (a.policy != Policy::Planner && f.s >= n.env.s_end()) a.exited = true;
  }

  if (collided(n)) {
    n.status = Status::Collided;
  } else if (!n.actors.empty() && frenet_of(n, 0).s >= n.env.s_end()) {
    n.status = Status::GoalReached;
  }
  return n;
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * unit_uniform(rng_);
  }
  int index(int n) { return static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

 private:
  Rng rng_;
};

ActorState make_actor(const RoadEnvironment& env, const VehicleParams& params, Route route, int lane,
                      double s_center, double v, Policy policy) {
  ActorState a;
  a.route = route;
  a.lane = lane;
  a.policy = policy;
  const Vec2 c = env.to_world(route, {s_center, env.lane_center(lane)});
  const double h = env.heading(route);
  a.vehicle.theta = h;
  a.vehicle.p_x = c.x - 0.5 * params.wheelbase * std::cos(h);
  a.vehicle.p_y = c.y - 0.5 * params.wheelbase * std::sin(h);
  a.vehicle.v = v;
  a.cleared = s_center >= env.box_end() + 0.5 * params.length;
  return a;
}

double required_gap(const RoadEnvironment& env, double v_follow, double v_lead) {
  return kFollowDistance +
         std::max(0.0, (v_follow * v_follow - v_lead * v_lead) / (2.0 * env.comfort_decel)) + 1.0;
}

}  // namespace

WorldState spawn_scenario(const ScenarioConfig& cfg) {
  if (cfg.n_vehicles < 0 || cfg.n_vehicles > 5) {
    throw std::invalid_argument("n_vehicles must be in 0..5");
  }
  constexpr int kAttempts = 1000;
  WorldState w;
  w.env = cfg.env;
  w.dt = cfg.dt;
  const auto& env = w.env;
  Sampler rng(cfg.seed);

  struct Slot {
    Route route;
    int lane;
    double s;
    double v;
  };
  std::vector<Slot> placed;
  auto compatible = [&](const Slot& c, std::size_t skip_gap_with) {
    for (std::size_t k = 0; k < placed.size(); ++k) {
      const Slot& o = placed[k];
      if (o.route != c.route || o.lane != c.lane) continue;
      const double gap = std::abs(o.s - c.s) - w.params.length;
      if (gap <= 0.5) return false;
      if (k == skip_gap_with) continue;
      const bool c_behind = c.s < o.s;
      const double need = c_behind ? required_gap(env, c.v, o.v) : required_gap(env, o.v, c.v);
      if (gap < need) return false;
    }
    return true;
  };

  const int agent_lane = rng.index(env.lanes);
  const double agent_s = rng.uniform(-40.0, -35.0);
  const double half = 0.5 * w.params.length;
  const double agent_v = rng.uniform(0.5, 1.0) * env.reference_speed(agent_s + half, true);
  placed.push_back({Route::East, agent_lane, agent_s, agent_v});
  w.actors.push_back(
      make_actor(env, w.params, Route::East, agent_lane, agent_s, agent_v, Policy::Planner));

  const double front_limit = env.stop_begin() - kFollowDistance;
  if (cfg.stopped_car) {
    // Somewhere ahead in the agent's lane, never closer than a hard stop
    // needs; either before the stop region or well past the intersection.
    const double brake = agent_v * agent_v / (2.0 * -w.params.a_min) + 3.0;
    const double near_lo = agent_s + w.params.length + brake;
    const double near_len = std::max(0.0, front_limit - near_lo);
    const double far_begin = 20.0;
    const double far_len = 15.0;
    bool ok = false;
    for (int attempt = 0; attempt < kAttempts && !ok; ++attempt) {
      const double u = rng.uniform(0.0, near_len + far_len);
      const double s = u < near_len ? near_lo + u : far_begin + (u - near_len);
      const Slot c{Route::East, agent_lane, s, 0.0};
      if (!compatible(c, 0)) continue;
      placed.push_back(c);
      w.actors.push_back(make_actor(env, w.params, c.route, c.lane, c.s, 0.0, Policy::Parked));
      ok = true;
    }
    if (!ok) throw PlacementError("could not place the stopped car");
  }

  const double rear_lo = env.s_begin() + 3.0;
  const double rear_hi = front_limit;
  const double far_lo = env.box_end() + 4.0;
  const double far_hi = env.s_end() - 5.0;
  for (int k = 0; k < cfg.n_vehicles; ++k) {
    bool ok = false;
    for (int attempt = 0; attempt < kAttempts && !ok; ++attempt) {
      const auto route = static_cast<Route>(rng.index(2));
      const int lane = rng.index(env.lanes);
      const double u = rng.uniform(0.0, (rear_hi - rear_lo) + (far_hi - far_lo));
      const double s = u < rear_hi - rear_lo ? rear_lo + u : far_lo + (u - (rear_hi - rear_lo));
      const double v = s < env.stop_begin() ? rng.uniform(0.5, 1.0) * env.reference_speed(s + half, true)
                                            : env.speed_limit;
      const Slot c{route, lane, s, v};
      if (!compatible(c, placed.size())) continue;
      placed.push_back(c);
      w.actors.push_back(make_actor(env, w.params, route, lane, s, v, Policy::Scripted));
      ok = true;
    }
    if (!ok) throw PlacementError("could not place vehicle " + std::to_string(k + 1));
  }
  return w;
}

}  // namespace ltlmcts::sim
