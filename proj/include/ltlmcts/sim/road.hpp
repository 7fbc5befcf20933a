#pragma once

#include <cstdint>
#include <string_view>

#include "ltlmcts/sim/geometry.hpp"

namespace ltlmcts::sim {

// Both roads are one-way. East runs along +x and is entered from the west
// approach; North runs along +y and is entered from the south approach.
enum class Route : std::uint8_t { East = 0, North = 1 };

enum class Approach : std::uint8_t { N = 0, E = 1, S = 2, W = 3 };

Approach approach_of(Route r);
std::string_view to_string(Route r);

// Road-aligned coordinates: s along the direction of travel, d to the left.
struct Frenet {
  double s = 0.0;
  double d = 0.0;
};

// Two crossing one-way roads centred on the origin. The intersection box is
// the square where the road surfaces overlap; each approach has a stop region
// abutting the box.
struct RoadEnvironment {
  double lane_width = 3.0;
  int lanes = 2;
  double segment_length = 90.0;
  double speed_limit = 11.18;
  double stop_depth = 5.0;
  double comfort_decel = 1.5;
  double go_accel = 1.0;

  friend bool operator==(const RoadEnvironment&, const RoadEnvironment&) = default;

  double half_width() const { return 0.5 * lane_width * lanes; }
  double s_begin() const { return -0.5 * segment_length; }
  double s_end() const { return 0.5 * segment_length; }
  double box_begin() const { return -half_width(); }
  double box_end() const { return half_width(); }
  double stop_begin() const { return box_begin() - stop_depth; }
  double stop_end() const { return box_begin(); }
  double stop_mid() const { return 0.5 * (stop_begin() + stop_end()); }

  // Lane 0 is the right-hand lane.
  double lane_center(int lane) const { return -half_width() + (lane + 0.5) * lane_width; }
  int nearest_lane(double d) const;
  bool valid_lane(int lane) const { return lane >= 0 && lane < lanes; }

  double heading(Route r) const { return r == Route::East ? 0.0 : 0.5 * std::numbers::pi; }
  Frenet to_frenet(Route r, Vec2 p) const;
  Vec2 to_world(Route r, Frenet f) const;
  OrientedBox intersection_box() const;

  // Speed profile for a vehicle whose front bumper is at `s_front`. Before its
  // stop it decelerates to zero at the middle of the stop region; afterwards
  // it ramps back up to the limit.
  double reference_speed(double s_front, bool needs_stop) const;
};

}  // namespace ltlmcts::sim
