#include "ltlmcts/features/features.hpp"

#include <cmath>
#include <limits>
#include <tuple>

namespace ltlmcts::features {

namespace {

struct Candidate {
  std::size_t index = 0;
  double dist = std::numeric_limits<double>::infinity();
  double dx = 0.0;
  double dy = 0.0;
  bool present = false;
};

bool closer(const Candidate& a, const Candidate& b) {
  return std::tie(a.dist, a.dx, a.dy, a.index) < std::tie(b.dist, b.dx, b.dy, b.index);
}

void write_empty(FeatureVector& f, Slot slot) {
  const std::size_t o = slot_offset(slot);
  switch (slot) {
    case Slot::Ahead:
    case Slot::OtherLaneAhead: f[o] = -kHorizon; break;
    case Slot::Behind:
    case Slot::OtherLaneBehind: f[o] = kHorizon; break;
    case Slot::CrossLeft: f[o + 1] = -kHorizon; break;
    case Slot::CrossRight: f[o + 1] = kHorizon; break;
  }
}

}  // namespace

double lateral_error(const sim::WorldState& w, std::size_t actor) {
  return sim::frenet_of(w, actor).d - w.env.lane_center(w.actors[actor].lane);
}

double heading_error(const sim::WorldState& w, std::size_t actor) {
  const auto& a = w.actors[actor];
  return sim::wrap_angle(a.vehicle.theta - w.env.heading(a.route));
}

FeatureVector features(const sim::WorldState& w, std::size_t actor) {
  FeatureVector f{};
  const auto& me = w.actors[actor];
  const auto& x = me.vehicle;
  const sim::Frenet fi = sim::frenet_of(w, actor);
  const int my_lane = w.env.nearest_lane(fi.d);

  f[0] = x.v;
  f[1] = sim::reference_speed(w, actor);
  f[2] = lateral_error(w, actor);
  f[3] = x.psi;
  f[4] = x.v * std::tan(x.psi) / w.params.wheelbase;
  f[5] = heading_error(w, actor);
  f[6] = my_lane;
  f[7] = fi.d - w.env.lane_center(my_lane);
  f[8] = x.u.a;
  f[9] = x.u.psi_dot;

  auto put_predicates = [&](std::size_t offset, ltl::Label l) {
    std::size_t k = 0;
    for (std::size_t bit = 0; bit < sim::kPredicateCount; ++bit) {
      if (bit == static_cast<std::size_t>(sim::Predicate::InStopRegion)) continue;
      f[offset + k++] = l.has(bit) ? 1.0 : 0.0;
    }
  };
  put_predicates(kEgoCount, sim::label(w, actor));

  std::array<Candidate, kSlotCount> best{};
  for (std::size_t j = 0; j < w.actors.size(); ++j) {
    if (j == actor || !sim::active(w, j)) continue;
    const sim::Vec2 pj = sim::footprint_center(w.actors[j].vehicle, w.params);
    const sim::Frenet fj = w.env.to_frenet(me.route, pj);
    Candidate c{j, std::hypot(fi.s - fj.s, fi.d - fj.d), fi.s - fj.s, fi.d - fj.d, true};
    if (c.dist > kHorizon) continue;
    Slot slot;
    if (w.actors[j].route != me.route) {
      slot = c.dy < 0.0 ? Slot::CrossLeft : Slot::CrossRight;
    } else {
      const bool same_lane = w.env.nearest_lane(fj.d) == my_lane;
      const bool ahead = c.dx < 0.0 || (c.dx == 0.0 && j > actor);
      slot = same_lane ? (ahead ? Slot::Ahead : Slot::Behind)
                       : (ahead ? Slot::OtherLaneAhead : Slot::OtherLaneBehind);
    }
    auto& cur = best[static_cast<std::size_t>(slot)];
    if (!cur.present || closer(c, cur)) cur = c;
  }

  for (std::size_t s = 0; s < kSlotCount; ++s) {
    const auto slot = static_cast<Slot>(s);
    const auto& c = best[s];
    if (!c.present) {
      write_empty(f, slot);
      continue;
    }
    const std::size_t o = slot_offset(slot);
    const auto& other = w.actors[c.index];
    f[o] = c.dx;
    f[o + 1] = c.dy;
    f[o + 2] = other.vehicle.v;
    f[o + 3] = other.vehicle.u.a;
    f[o + 4] = w.waited(c.index);
    put_predicates(o + 5, sim::label(w, c.index));
  }
  return f;
}

}  // namespace ltlmcts::features
