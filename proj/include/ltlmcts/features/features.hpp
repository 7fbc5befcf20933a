#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "ltlmcts/sim/world.hpp"

namespace ltlmcts::features {

inline constexpr std::size_t kEgoCount = 10;
inline constexpr std::size_t kWorldPredicateCount = 8;
inline constexpr std::size_t kSlotCount = 6;
inline constexpr std::size_t kSlotWidth = 13;
inline constexpr std::size_t kFeatureCount = kEgoCount + kWorldPredicateCount + kSlotCount * kSlotWidth;
static_assert(kFeatureCount == 96);

// Bumped whenever the layout below changes.
inline constexpr int kFeatureSchemaVersion = 1;

inline constexpr double kHorizon = 50.0;

enum class Slot : std::size_t { Ahead, Behind, OtherLaneAhead, OtherLaneBehind, CrossLeft, CrossRight };

// Ego block:   v, v_ref, e_y, psi, v*tan(psi)/L, e_theta, lane, e_y_lane, a, psi_dot
// World block: every predicate except in_stop_region, in label bit order
// Slot block:  dx, dy, v_j, a_j, waited_j, then the neighbour's 8 predicates.
//              dx = s_i - s_j and dy = d_i - d_j in the ego route frame, so a
//              leader 10 m ahead has dx = -10. An empty slot holds the
//              horizon in its direction and zeros elsewhere.
using FeatureVector = std::array<double, kFeatureCount>;

inline constexpr std::size_t slot_offset(Slot s) {
  return kEgoCount + kWorldPredicateCount + static_cast<std::size_t>(s) * kSlotWidth;
}

FeatureVector features(const sim::WorldState& w, std::size_t actor);

// Lateral offset from the lane the actor is assigned to and heading error.
double lateral_error(const sim::WorldState& w, std::size_t actor);
double heading_error(const sim::WorldState& w, std::size_t actor);

}  // namespace ltlmcts::features
