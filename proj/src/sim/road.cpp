#include "ltlmcts/sim/road.hpp"

#include <algorithm>
#include <cmath>

namespace ltlmcts::sim {

Approach approach_of(Route r) { return r == Route::East ? Approach::W : Approach::S; }

std::string_view to_string(Route r) { return r == Route::East ? "east" : "north"; }

int RoadEnvironment::nearest_lane(double d) const {
  const int lane = static_cast<int>(std::floor((d + half_width()) / lane_width));
  return std::clamp(lane, 0, lanes - 1);
}

Frenet RoadEnvironment::to_frenet(Route r, Vec2 p) const {
  if (r == Route::East) return {p.x, p.y};
  return {p.y, -p.x};
}

Vec2 RoadEnvironment::to_world(Route r, Frenet f) const {
  if (r == Route::East) return {f.s, f.d};
  return {-f.d, f.s};
}

OrientedBox RoadEnvironment::intersection_box() const {
  return {{0.0, 0.0}, 0.0, half_width(), half_width()};
}

double RoadEnvironment::reference_speed(double s, bool needs_stop) const {
  if (needs_stop) {
    const double remaining = std::max(0.0, stop_mid() - s);
    return std::min(speed_limit, std::sqrt(2.0 * comfort_decel * remaining));
  }
  const double past = std::max(0.0, s - stop_mid());
  return std::min(speed_limit, std::max(2.0, std::sqrt(2.0 * go_accel * past)));
}

}  // namespace ltlmcts::sim
