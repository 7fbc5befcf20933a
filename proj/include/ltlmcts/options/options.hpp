#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ltlmcts/ltl/formula.hpp"
#include "ltlmcts/sim/world.hpp"

namespace ltlmcts::options {

enum class OptionId : std::uint8_t { Default, Follow, Pass, Stop, Wait, Left, Right, Finish };

inline constexpr std::size_t kOptionCount = 8;
inline constexpr std::array<OptionId, kOptionCount> kAllOptions{
    OptionId::Default, OptionId::Follow, OptionId::Pass, OptionId::Stop,
    OptionId::Wait,    OptionId::Left,   OptionId::Right, OptionId::Finish};

inline constexpr std::size_t ordinal(OptionId o) { return static_cast<std::size_t>(o); }
std::string_view name(OptionId o);
char letter(OptionId o);
std::optional<OptionId> option_from_name(std::string_view s);

// Bitmask over option ordinals.
using OptionSet = std::uint8_t;
inline constexpr bool contains(OptionSet s, OptionId o) { return (s >> ordinal(o)) & 1u; }
inline constexpr OptionSet with(OptionSet s, OptionId o) {
  return static_cast<OptionSet>(s | (1u << ordinal(o)));
}

struct OptionsConfig {
  sim::LateralGains lateral;
  double k_v = 1.0;
  double max_duration = 5.0;
  double wait_max_duration = 10.0;  // Wait ends when the intersection is behind the agent
  double follow_range = 40.0;  // a leader this close makes Follow and Pass applicable
  double pass_margin = 6.0;    // bumper clearance ahead of the passed leader before returning
  double stop_bonus = 10.0;
  double wait_bonus = 10.0;
  double pass_bonus = 10.0;
};

struct OptionSpec {
  OptionId id;
  ltl::Formula constraint;
  double goal_bonus = 0.0;
  double max_duration = 5.0;
};

double max_duration(OptionId o, const OptionsConfig& cfg = {});
OptionSpec option_spec(OptionId o, const OptionsConfig& cfg = {});
ltl::Formula option_constraint(OptionId o);

class InapplicableOption : public std::runtime_error {
 public:
  explicit InapplicableOption(OptionId o)
      : std::runtime_error("option " + std::string(name(o)) + " is not applicable"), id_(o) {}
  OptionId id() const { return id_; }

 private:
  OptionId id_;
};

bool applicable(OptionId o, const sim::WorldState& w, const OptionsConfig& cfg = {});
OptionSet applicable_set(const sim::WorldState& w, const OptionsConfig& cfg = {});

// Per-invocation controller state.
struct OptionContext {
  OptionId id = OptionId::Default;
  int start_lane = 0;
  int target_lane = 0;
  std::optional<std::size_t> leader;  // vehicle being passed
  bool returning = false;
};

// Throws InapplicableOption.
OptionContext begin_option(OptionId o, const sim::WorldState& w, const OptionsConfig& cfg = {});

// Control for the agent. May advance the context's internal phase; the caller
// keeps the agent's assigned lane equal to ctx.target_lane.
sim::Control option_control(OptionContext& ctx, const sim::WorldState& w,
                            const OptionsConfig& cfg = {});

// Success condition of the option.
bool option_goal(const OptionContext& ctx, const sim::WorldState& w);

bool option_terminated(const OptionContext& ctx, const sim::WorldState& w, double elapsed,
                       const OptionsConfig& cfg = {});

}  // namespace ltlmcts::options
