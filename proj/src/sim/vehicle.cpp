#include "ltlmcts/sim/vehicle.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

namespace ltlmcts::sim {

Control clamp_control(Control u, const VehicleParams& params) {
  return {std::clamp(u.a, params.a_min, params.a_max),
          std::clamp(u.psi_dot, -params.psi_dot_max, params.psi_dot_max)};
}

VehicleState step_vehicle(const VehicleState& x, Control u, double dt, const VehicleParams& params) {
  const Control c = clamp_control(u, params);
  constexpr double kSlack = 1e-9;
  if (std::abs(c.a - u.a) > kSlack || std::abs(c.psi_dot - u.psi_dot) > kSlack) {
    spdlog::warn("control ({}, {}) clamped to ({}, {})", u.a, u.psi_dot, c.a, c.psi_dot);
  }
  VehicleState n = x;
  n.p_x += dt * x.v * std::cos(x.theta);
  n.p_y += dt * x.v * std::sin(x.theta);
  n.theta = wrap_angle(x.theta + dt * x.v * std::tan(x.psi) / params.wheelbase);
  n.v = std::max(0.0, x.v + dt * c.a);
  n.psi = std::clamp(x.psi + dt * c.psi_dot, -params.psi_max, params.psi_max);
  n.u = c;
  return n;
}

Vec2 footprint_center(const VehicleState& x, const VehicleParams& params) {
  const double h = 0.5 * params.wheelbase;
  return {x.p_x + h * std::cos(x.theta), x.p_y + h * std::sin(x.theta)};
}

OrientedBox footprint(const VehicleState& x, const VehicleParams& params) {
  return {footprint_center(x, params), x.theta, 0.5 * params.length, 0.5 * params.width};
}

}  // namespace ltlmcts::sim
