#include "ltlmcts/options/options.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ltlmcts/ltl/parser.hpp"

namespace ltlmcts::options {

namespace {

constexpr double kAccelMax = 2.0;
constexpr double kBrakeMax = 2.0;
constexpr double kBandMargin = 0.3;
constexpr double kStandoff = 2.0;  // bumper distance kept when braking hard for a leader
constexpr double kSteerLag = 0.3;

double clamp_accel(double a) { return std::clamp(a, -kBrakeMax, kAccelMax); }

double brake_to_zero(const sim::WorldState& w) {
  return -std::min(kBrakeMax, w.actors[0].vehicle.v / w.dt);
}

double track(double v, double target, double ff, double k_v) { return k_v * (target - v) + ff; }

// Brings the front bumper to rest at the middle of the stop region, braking
// harder than comfortable only when the comfortable profile is already lost.
double stop_line_accel(const sim::WorldState& w, double k_v) {
  const double v = w.actors[0].vehicle.v;
  const double remaining = w.env.stop_mid() - sim::front_s(w, 0);
  if (remaining <= 0.05) return brake_to_zero(w);
  const double b = w.env.comfort_decel;
  const double needed = v * v / (2.0 * remaining);
  if (needed > b) return -std::min(kBrakeMax, needed);
  const double curve = std::sqrt(2.0 * b * remaining);
  const double ff = -b * std::min(1.0, v / curve);
  return track(v, std::min(w.env.speed_limit, curve), curve < w.env.speed_limit ? ff : 0.0, k_v);
}

double free_accel(const sim::WorldState& w, double k_v) {
  if (sim::needs_stop(w, 0)) return stop_line_accel(w, k_v);
  return track(w.actors[0].vehicle.v, sim::reference_speed(w, 0), 0.0, k_v);
}

struct Band {
  double lo;
  double hi;
};

double reach_of(const sim::WorldState& w) {
  return sim::lateral_extent(
             w.params, sim::wrap_angle(w.actors[0].vehicle.theta - w.env.heading(w.actors[0].route))) +
         kBandMargin;
}

// Lateral offset the agent is expected to have after `t` seconds of steering
// toward `target_d`, allowing for steering lag and the approach-angle cap.
double predicted_offset(const sim::WorldState& w, double target_d, double t, const sim::LateralGains& g) {
  const double d = sim::frenet_of(w, 0).d;
  const double active = std::max(0.0, t - kSteerLag);
  const double by_rate = std::max(w.actors[0].vehicle.v, 1.0) * std::sin(g.max_approach) * active;
  const double by_law = std::abs(target_d - d) * (1.0 - std::exp(-g.k_y * active));
  const double moved = std::min({by_rate, by_law, std::abs(target_d - d)});
  return d + std::copysign(moved, target_d - d);
}

double follow_accel(const sim::WorldState& w, const sim::LeaderInfo& lead, double k_v) {
  const double v = w.actors[0].vehicle.v;
  const double room = lead.gap - kStandoff;
  if (v > lead.v) {
    if (room <= 0.05) return -kBrakeMax;
    const double needed = (v * v - lead.v * lead.v) / (2.0 * room);
    if (needed > w.env.comfort_decel) return -std::min(kBrakeMax, needed);
  }
  return track(v, sim::gap_speed(w.env, lead.gap, lead.v, sim::kFollowDistance), 0.0, k_v);
}

// Keeps clear of vehicles in the target lane and of vehicles the agent will
// still overlap laterally by the time it reaches them.
double gap_accel(const sim::WorldState& w, int target_lane, const OptionsConfig& cfg) {
  double a = std::numeric_limits<double>::infinity();
  const double c = w.env.lane_center(target_lane);
  const double h = 0.5 * w.env.lane_width;
  if (const auto lead = sim::leader_in_band(w, 0, c - h, c + h)) a = follow_accel(w, *lead, cfg.k_v);

  const double reach = reach_of(w);
  const double d = sim::frenet_of(w, 0).d;
  const auto near = sim::leader_in_band(w, 0, d - reach, d + reach);
  if (!near) return a;
  const double closing = w.actors[0].vehicle.v - near->v;
  const double t = closing > 0.0 ? near->gap / closing : std::numeric_limits<double>::infinity();
  const double d_then = std::isfinite(t) ? predicted_offset(w, c, t, cfg.lateral) : c;
  if (const auto lead = sim::leader_in_band(w, 0, d_then - reach, d_then + reach)) {
    a = std::min(a, follow_accel(w, *lead, cfg.k_v));
  }
  return a;
}

bool corners_in_lane(const sim::WorldState& w, int lane) {
  const double c = w.env.lane_center(lane);
  const double h = 0.5 * w.env.lane_width;
  for (const auto& p : sim::footprint_of(w, 0).corners()) {
    const double d = w.env.to_frenet(w.actors[0].route, p).d;
    if (d < c - h || d > c + h) return false;
  }
  return true;
}

int current_lane(const sim::WorldState& w) { return w.env.nearest_lane(sim::frenet_of(w, 0).d); }

std::optional<sim::LeaderInfo> near_leader(const sim::WorldState& w, const OptionsConfig& cfg) {
  auto lead = sim::leader_in_lane(w, 0, current_lane(w));
  if (lead && lead->gap <= cfg.follow_range) return lead;
  return std::nullopt;
}

bool past_box(const sim::WorldState& w) { return sim::frenet_of(w, 0).s >= w.env.box_end(); }

bool pass_complete(const OptionContext& ctx, const sim::WorldState& w) {
  return ctx.returning && corners_in_lane(w, ctx.start_lane) &&
         std::abs(sim::frenet_of(w, 0).d - w.env.lane_center(ctx.start_lane)) < 0.5;
}

}  // namespace

std::string_view name(OptionId o) {
  switch (o) {
    case OptionId::Default: return "Default";
    case OptionId::Follow: return "Follow";
    case OptionId::Pass: return "Pass";
    case OptionId::Stop: return "Stop";
    case OptionId::Wait: return "Wait";
    case OptionId::Left: return "Left";
    case OptionId::Right: return "Right";
    case OptionId::Finish: return "Finish";
  }
  return "?";
}

char letter(OptionId o) {
  constexpr std::array<char, kOptionCount> letters{'D', 'F', 'P', 'S', 'W', 'L', 'R', 'C'};
  return letters[ordinal(o)];
}

std::optional<OptionId> option_from_name(std::string_view s) {
  for (auto o : kAllOptions) {
    if (name(o) == s) return o;
  }
  return std::nullopt;
}

ltl::Formula option_constraint(OptionId o) {
  static const ltl::Formula wait = ltl::parse(
      "G (has_stopped_in_stop_region -> (in_stop_region | in_intersection))", sim::world_alphabet());
  static const ltl::Formula stop = ltl::parse("F in_stop_region", sim::world_alphabet());
  switch (o) {
    case OptionId::Wait: return wait;
    case OptionId::Stop: return stop;
    default: return ltl::Formula::truth();
  }
}

double max_duration(OptionId o, const OptionsConfig& cfg) {
  return o == OptionId::Wait ? cfg.wait_max_duration : cfg.max_duration;
}

OptionSpec option_spec(OptionId o, const OptionsConfig& cfg) {
  double bonus = 0.0;
  if (o == OptionId::Stop) bonus = cfg.stop_bonus;
  if (o == OptionId::Wait) bonus = cfg.wait_bonus;
  if (o == OptionId::Pass) bonus = cfg.pass_bonus;
  return {o, option_constraint(o), bonus, max_duration(o, cfg)};
}

bool applicable(OptionId o, const sim::WorldState& w, const OptionsConfig& cfg) {
  if (w.status != sim::Status::Running) return false;
  const auto& agent = w.actors[0];
  const int lane = current_lane(w);
  switch (o) {
    case OptionId::Default: return true;
    case OptionId::Follow:
    case OptionId::Pass: return near_leader(w, cfg).has_value();
    case OptionId::Stop: return sim::needs_stop(w, 0);
    case OptionId::Wait:
      return !agent.cleared && !past_box(w) && (agent.has_stopped_in_stop_region || sim::in_stop_region(w, 0));
    case OptionId::Left: return lane + 1 < w.env.lanes;
    case OptionId::Right: return lane > 0;
    case OptionId::Finish: return agent.has_stopped_in_stop_region;
  }
  return false;
}

OptionSet applicable_set(const sim::WorldState& w, const OptionsConfig& cfg) {
  OptionSet s = 0;
  for (auto o : kAllOptions) {
    if (applicable(o, w, cfg)) s = with(s, o);
  }
  return s;
}

OptionContext begin_option(OptionId o, const sim::WorldState& w, const OptionsConfig& cfg) {
  if (!applicable(o, w, cfg)) throw InapplicableOption(o);
  OptionContext ctx;
  ctx.id = o;
  ctx.start_lane = w.actors[0].lane;
  ctx.target_lane = w.actors[0].lane;
  const int lane = current_lane(w);
  switch (o) {
    case OptionId::Left: ctx.start_lane = lane; ctx.target_lane = lane + 1; break;
    case OptionId::Right: ctx.start_lane = lane; ctx.target_lane = lane - 1; break;
    case OptionId::Pass:
      ctx.start_lane = lane;
      ctx.target_lane = lane + 1 < w.env.lanes ? lane + 1 : lane - 1;
      ctx.leader = near_leader(w, cfg)->index;
      break;
    default: break;
  }
  return ctx;
}

sim::Control option_control(OptionContext& ctx, const sim::WorldState& w, const OptionsConfig& cfg) {
  const auto& agent = w.actors[0];
  const double v = agent.vehicle.v;

  if (ctx.id == OptionId::Pass && !ctx.returning) {
    const bool leader_gone = !ctx.leader || !sim::active(w, *ctx.leader);
    const double ahead = leader_gone ? std::numeric_limits<double>::infinity()
                                     : sim::frenet_of(w, 0).s - sim::frenet_of(w, *ctx.leader).s;
    if (ahead >= w.params.length + cfg.pass_margin) {
      ctx.returning = true;
      ctx.target_lane = ctx.start_lane;
    }
  }

  const double steer = sim::steer_to_offset(w, 0, w.env.lane_center(ctx.target_lane), cfg.lateral);
  double a = 0.0;
  switch (ctx.id) {
    case OptionId::Default: a = free_accel(w, cfg.k_v); break;
    case OptionId::Follow:
    case OptionId::Pass:
    case OptionId::Left:
    case OptionId::Right:
    case OptionId::Stop:
      a = std::min(free_accel(w, cfg.k_v), gap_accel(w, ctx.target_lane, cfg));
      break;
    case OptionId::Wait: {
      const bool hp = sim::higher_priority(w, 0);
      if (sim::needs_stop(w, 0)) {
        a = std::min(stop_line_accel(w, cfg.k_v), gap_accel(w, ctx.target_lane, cfg));
      } else if (sim::in_intersection(w, 0) || (hp && sim::intersection_is_clear(w, 0))) {
        a = std::min(track(v, sim::reference_speed(w, 0), 0.0, cfg.k_v),
                     gap_accel(w, ctx.target_lane, cfg));
      } else {
        a = brake_to_zero(w);
      }
      if (!hp) a = std::min(a, 0.0);
      break;
    }
    case OptionId::Finish: {
      const double target = w.env.reference_speed(sim::front_s(w, 0), false);
      a = std::min(track(v, target, 0.0, cfg.k_v), gap_accel(w, ctx.target_lane, cfg));
      break;
    }
  }
  if (v <= 0.0 && a < 0.0) a = 0.0;
  return {clamp_accel(a), steer};
}

bool option_goal(const OptionContext& ctx, const sim::WorldState& w) {
  switch (ctx.id) {
    case OptionId::Stop: return w.actors[0].has_stopped_in_stop_region;
    case OptionId::Wait: return past_box(w) && w.actors[0].has_stopped_in_stop_region;
    case OptionId::Pass: return pass_complete(ctx, w);
    case OptionId::Left:
    case OptionId::Right: return corners_in_lane(w, ctx.target_lane);
    case OptionId::Finish: return w.status == sim::Status::GoalReached;
    case OptionId::Default:
    case OptionId::Follow: return false;
  }
  return false;
}

bool option_terminated(const OptionContext& ctx, const sim::WorldState& w, double elapsed,
                       const OptionsConfig& cfg) {
  if (w.status != sim::Status::Running) return true;
  if (elapsed >= max_duration(ctx.id, cfg) - 1e-9) return true;
  switch (ctx.id) {
    case OptionId::Wait: return past_box(w);
    case OptionId::Pass:
      return pass_complete(ctx, w) || !ctx.leader || !sim::active(w, *ctx.leader);
    default: return option_goal(ctx, w);
  }
}

}  // namespace ltlmcts::options
