#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ltlmcts/ltl/alphabet.hpp"
#include "ltlmcts/sim/road.hpp"
#include "ltlmcts/sim/vehicle.hpp"

namespace ltlmcts::sim {

enum class Policy : std::uint8_t { Planner, Scripted, Parked };

enum class Status : std::uint8_t { Running, Collided, ConstraintViolated, GoalReached, Timeout };

std::string_view to_string(Status s);

// Bit positions of the atomic propositions in a world label.
enum class Predicate : std::uint8_t {
  NotInStopRegion,
  HasEnteredStopRegion,
  HasStoppedInStopRegion,
  InStopRegion,
  InIntersection,
  OverSpeedLimit,
  OnRoute,
  IntersectionIsClear,
  HigherPriority,
};
inline constexpr std::size_t kPredicateCount = 9;

const ltl::Alphabet& world_alphabet();

struct ActorState {
  VehicleState vehicle;
  Route route = Route::East;
  int lane = 0;  // lane the actor keeps to; scripted and parked actors never change it
  Policy policy = Policy::Scripted;
  bool has_entered_stop_region = false;
  bool has_stopped_in_stop_region = false;
  bool committed = false;  // released from the stop line
  bool cleared = false;    // footprint left the far side of the intersection box
  bool exited = false;     // drove off the end of the segment
  std::int64_t waited_steps = 0;

  friend bool operator==(const ActorState&, const ActorState&) = default;
};

struct WorldState {
  RoadEnvironment env;
  VehicleParams params;
  double dt = 0.1;
  std::int64_t step = 0;
  std::vector<ActorState> actors;  // index 0 is the planner agent
  Status status = Status::Running;

  double time() const { return static_cast<double>(step) * dt; }
  double waited(std::size_t i) const { return static_cast<double>(actors[i].waited_steps) * dt; }

  friend bool operator==(const WorldState&, const WorldState&) = default;
};

// Geometric queries on one actor.
Frenet frenet_of(const WorldState& w, std::size_t i);
OrientedBox footprint_of(const WorldState& w, std::size_t i);
bool in_stop_region(const WorldState& w, std::size_t i);
bool in_intersection(const WorldState& w, std::size_t i);
bool needs_stop(const WorldState& w, std::size_t i);
double front_s(const WorldState& w, std::size_t i);
// Vehicles stop with the front bumper at the middle of the stop region.
double reference_speed(const WorldState& w, std::size_t i);
bool is_waiting(const WorldState& w, std::size_t i);
bool higher_priority(const WorldState& w, std::size_t i);
bool intersection_is_clear(const WorldState& w, std::size_t i);
bool active(const WorldState& w, std::size_t i);

ltl::Label label(const WorldState& w, std::size_t i);

struct LeaderInfo {
  std::size_t index;
  double gap;  // bumper to bumper along the route
  double v;
};

// Nearest active vehicle ahead on the same route whose footprint reaches into
// the lateral band [d_lo, d_hi] of that route.
std::optional<LeaderInfo> leader_in_band(const WorldState& w, std::size_t i, double d_lo, double d_hi);
std::optional<LeaderInfo> leader_in_lane(const WorldState& w, std::size_t i, int lane);

// Lateral reach of a footprint from its centre line at a given heading error.
double lateral_extent(const VehicleParams& p, double heading_error);

// Pursuit of a lateral offset: the offset error sets a desired heading, the
// heading error a yaw rate capped by a_lat_max, the yaw rate a steering angle
// tracked by the steering-rate command.
struct LateralGains {
  double k_y = 1.5;             // 1/s
  double k_theta = 3.0;         // 1/s
  double k_psi = 8.0;           // 1/s
  double max_approach = 0.3;    // rad
  double a_lat_max = 4.0;       // m/s^2
};

double steer_to_offset(const WorldState& w, std::size_t i, double target_d,
                       const LateralGains& gains = {});

// Speed that keeps the follow distance behind a leader at speed v_lead.
double gap_speed(const RoadEnvironment& env, double gap, double v_lead, double follow_distance = 6.0);

inline constexpr double kFollowDistance = 6.0;
inline constexpr double kStoppedSpeed = 0.1;

Control scripted_actor_control(const WorldState& w, std::size_t i);

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

WorldState advance_world(const WorldState& w, Control planner_control);

bool collided(const WorldState& w);

struct ScenarioConfig {
  std::uint64_t seed = 1;
  int n_vehicles = 0;
  bool stopped_car = false;
  RoadEnvironment env;
  double dt = 0.1;
};

class PlacementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

WorldState spawn_scenario(const ScenarioConfig& cfg);

}  // namespace ltlmcts::sim
