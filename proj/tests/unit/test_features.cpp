#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ltlmcts/features/features.hpp"
#include "ltlmcts/features/reward.hpp"
#include "world_builder.hpp"

using namespace ltlmcts;
using namespace ltlmcts::features;
using sim::Route;
using testing_support::add_actor;
using testing_support::empty_world;
using testing_support::place;

namespace {

std::array<double, kSlotWidth> slot_of(const FeatureVector& f, Slot s) {
  std::array<double, kSlotWidth> out{};
  std::copy_n(f.begin() + static_cast<std::ptrdiff_t>(slot_offset(s)), kSlotWidth, out.begin());
  return out;
}

std::array<double, kSlotWidth> empty_slot(Slot s) {
  std::array<double, kSlotWidth> out{};
  switch (s) {
    case Slot::Ahead:
    case Slot::OtherLaneAhead: out[0] = -kHorizon; break;
    case Slot::Behind:
    case Slot::OtherLaneBehind: out[0] = kHorizon; break;
    case Slot::CrossLeft: out[1] = -kHorizon; break;
    case Slot::CrossRight: out[1] = kHorizon; break;
  }
  return out;
}

constexpr std::array kSlots{Slot::Ahead,          Slot::Behind,    Slot::OtherLaneAhead,
                            Slot::OtherLaneBehind, Slot::CrossLeft, Slot::CrossRight};

}  // namespace

TEST_CASE("alone: every slot holds the empty encoding") {
  const auto f = features::features(empty_world(), 0);
  for (auto s : kSlots) CHECK(slot_of(f, s) == empty_slot(s));
}

TEST_CASE("centred at the reference speed: tracking errors vanish") {
  auto w = empty_world();
  place(w, 0, Route::East, -30.0, w.env.lane_center(1), 0.0);
  w.actors[0].vehicle.v = sim::reference_speed(w, 0);
  const auto f = features::features(w, 0);
  CHECK(f[2] == doctest::Approx(0.0));
  CHECK(f[5] == doctest::Approx(0.0));
  CHECK(f[0] - f[1] == doctest::Approx(0.0));
  CHECK(f[6] == 1.0);
}

TEST_CASE("leader ten metres ahead fills the ahead slot") {
  auto w = empty_world();
  place(w, 0, Route::East, -30.0, w.env.lane_center(0), 5.0);
  add_actor(w, Route::East, -20.0, w.env.lane_center(0), 3.0);
  const auto f = features::features(w, 0);
  const auto ahead = slot_of(f, Slot::Ahead);
  CHECK(ahead[0] == doctest::Approx(-10.0));
  CHECK(ahead[1] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(ahead[2] == 3.0);
  for (auto s : kSlots) {
    if (s != Slot::Ahead) CHECK(slot_of(f, s) == empty_slot(s));
  }
}

TEST_CASE("neighbours land in their geometric slots") {
  auto w = empty_world();
  place(w, 0, Route::East, -30.0, w.env.lane_center(0), 5.0);
  add_actor(w, Route::East, -38.0, w.env.lane_center(0), 5.0);
  add_actor(w, Route::East, -25.0, w.env.lane_center(1), 5.0);
  add_actor(w, Route::East, -37.0, w.env.lane_center(1), 5.0);
  const auto f = features::features(w, 0);
  CHECK(slot_of(f, Slot::Behind)[0] == doctest::Approx(8.0));
  CHECK(slot_of(f, Slot::OtherLaneAhead)[0] == doctest::Approx(-5.0));
  CHECK(slot_of(f, Slot::OtherLaneAhead)[1] == doctest::Approx(-3.0));
  CHECK(slot_of(f, Slot::OtherLaneBehind)[0] == doctest::Approx(7.0));
}

TEST_CASE("horizon saturation") {
  auto w = empty_world();
  place(w, 0, Route::East, -40.0, w.env.lane_center(0), 5.0);
  const auto j = add_actor(w, Route::East, 9.0, w.env.lane_center(0), 5.0);
  w.actors[j].has_stopped_in_stop_region = true;
  CHECK(slot_of(features::features(w, 0), Slot::Ahead)[0] == doctest::Approx(-49.0));
  place(w, j, Route::East, 11.0, w.env.lane_center(0), 5.0);
  CHECK(slot_of(features::features(w, 0), Slot::Ahead) == empty_slot(Slot::Ahead));
}

TEST_CASE("length is fixed and entries finite across worlds") {
  static_assert(std::tuple_size_v<FeatureVector> == 96);
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    sim::ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.n_vehicles = static_cast<int>(seed % 6);
    cfg.stopped_car = seed % 3 == 0;
    auto w = sim::spawn_scenario(cfg);
    for (int k = 0; k < 100 && w.status == sim::Status::Running; ++k) {
      for (std::size_t i = 0; i < w.actors.size(); ++i) {
        const auto f = features::features(w, i);
        CHECK(std::all_of(f.begin(), f.end(), [](double x) { return std::isfinite(x); }));
      }
      w = sim::advance_world(w, {0.2, 0.0});
    }
  }
}

TEST_CASE("relabelling other actors leaves the agent's features unchanged") {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    sim::ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.n_vehicles = 5;
    cfg.stopped_car = seed % 2 == 0;
    auto w = sim::spawn_scenario(cfg);
    for (int k = 0; k < 30 && w.status == sim::Status::Running; ++k) w = sim::advance_world(w, {});
    if (w.status != sim::Status::Running) continue;
    auto shuffled = w;
    std::shuffle(shuffled.actors.begin() + 1, shuffled.actors.end(), rng);
    CHECK(features::features(w, 0) == features::features(shuffled, 0));
  }
}

TEST_CASE("step cost examples") {
  auto w = empty_world();
  place(w, 0, Route::East, 20.0, w.env.lane_center(0), 0.0);
  w.actors[0].has_stopped_in_stop_region = true;
  w.actors[0].cleared = true;
  const double v_ref = sim::reference_speed(w, 0);
  w.actors[0].vehicle.v = v_ref;
  CHECK(step_cost(w, {}, {}) == 0.0);

  RewardWeights unit{1, 1, 1, 1, 1, 1, 1};
  auto off = w;
  place(off, 0, Route::East, 20.0, w.env.lane_center(0) + 1.0, v_ref);
  CHECK(step_cost(off, {}, {}, unit) == doctest::Approx(-1.0));

  RewardWeights skew;
  skew.underspeed = 1.0;
  skew.overspeed = 2.0;
  auto fast = w;
  auto slow = w;
  fast.actors[0].vehicle.v = v_ref + 2.0;
  slow.actors[0].vehicle.v = v_ref - 2.0;
  CHECK(step_cost(fast, {}, {}, skew) < step_cost(slow, {}, {}, skew));
}

TEST_CASE("step cost is never positive and zero only at zero residual") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    auto w = empty_world();
    place(w, 0, Route::East, -30.0 + 60.0 * std::abs(u(rng)), w.env.lane_center(0) + u(rng),
          5.0 + 5.0 * u(rng));
    w.actors[0].vehicle.theta = 0.2 * u(rng);
    const sim::Control a{2.0 * u(rng), u(rng)};
    const sim::Control b{2.0 * u(rng), u(rng)};
    const double c = step_cost(w, a, b);
    CHECK(c <= 0.0);
    const auto r = residual(w, a, b);
    const bool zero = std::all_of(r.begin(), r.end(), [](double x) { return x == 0.0; });
    CHECK((c == 0.0) == zero);
  }
}

TEST_CASE("terminal reward examples") {
  CHECK(terminal_reward(sim::Status::Collided, {}) == -200.0);
  CHECK(terminal_reward(sim::Status::ConstraintViolated, {true, false}) == -200.0);
  CHECK(terminal_reward(sim::Status::GoalReached, {true, true}) == 400.0);
  CHECK(terminal_reward(sim::Status::Timeout, {true, false}) == 200.0);
  CHECK(terminal_reward(sim::Status::Timeout, {true, false}, 10.0) == 210.0);
}
