#pragma once

#include <array>
#include <cstddef>

#include "ltlmcts/sim/world.hpp"

namespace ltlmcts::features {

// Diagonal weights over the residual
// (e_y, e_theta, v - v_ref, min(0, v_ref - v), a, a_dot, psi_dot).
struct RewardWeights {
  double e_y = 1.0;
  double e_theta = 0.5;
  double underspeed = 0.1;
  double overspeed = 0.4;
  double accel = 0.1;
  double jerk = 0.05;
  double psi_dot = 0.1;

  std::array<double, 7> diagonal() const {
    return {e_y, e_theta, underspeed, overspeed, accel, jerk, psi_dot};
  }
};

inline constexpr double kFailurePenalty = -200.0;
inline constexpr double kGoalReward = 200.0;

struct Goals {
  bool stopped_at_sign = false;
  bool exited_region = false;

  int count() const { return int{stopped_at_sign} + int{exited_region}; }
};

Goals achieved_goals(const sim::WorldState& w);

std::array<double, 7> residual(const sim::WorldState& w, sim::Control u, sim::Control prev_u);

// -(r^T W r) for the agent in `w` under control u; never positive.
double step_cost(const sim::WorldState& w, sim::Control u, sim::Control prev_u,
                 const RewardWeights& weights = {});

// step_cost as a rate held over one time step, so returns do not depend on dt.
double step_reward(const sim::WorldState& w, sim::Control u, sim::Control prev_u,
                   const RewardWeights& weights = {});

// Failure penalty or per-goal reward, plus any option bonus.
double terminal_reward(sim::Status status, Goals goals, double bonus = 0.0);

}  // namespace ltlmcts::features
