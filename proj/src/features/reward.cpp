#include "ltlmcts/features/reward.hpp"

#include <algorithm>

#include "ltlmcts/features/features.hpp"

namespace ltlmcts::features {

Goals achieved_goals(const sim::WorldState& w) {
  return {w.actors[0].has_stopped_in_stop_region, w.status == sim::Status::GoalReached};
}

std::array<double, 7> residual(const sim::WorldState& w, sim::Control u, sim::Control prev_u) {
  const double v = w.actors[0].vehicle.v;
  const double v_ref = sim::reference_speed(w, 0);
  return {lateral_error(w, 0),
          heading_error(w, 0),
          v - v_ref,
          std::min(0.0, v_ref - v),
          u.a,
          (u.a - prev_u.a) / w.dt,
          u.psi_dot};
}

double step_cost(const sim::WorldState& w, sim::Control u, sim::Control prev_u,
                 const RewardWeights& weights) {
  const auto r = residual(w, u, prev_u);
  const auto d = weights.diagonal();
  double sum = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) sum += d[k] * r[k] * r[k];
  return -sum;
}

double step_reward(const sim::WorldState& w, sim::Control u, sim::Control prev_u,
                   const RewardWeights& weights) {
  return w.dt * step_cost(w, u, prev_u, weights);
}

double terminal_reward(sim::Status status, Goals goals, double bonus) {
  if (status == sim::Status::Collided || status == sim::Status::ConstraintViolated) {
    return kFailurePenalty + bonus;
  }
  return kGoalReward * goals.count() + bonus;
}

}  // namespace ltlmcts::features
