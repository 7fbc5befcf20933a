#pragma once

#include "ltlmcts/sim/geometry.hpp"

namespace ltlmcts::sim {

struct Control {
  double a = 0.0;        // m/s^2
  double psi_dot = 0.0;  // rad/s

  friend bool operator==(const Control&, const Control&) = default;
};

struct VehicleParams {
  double wheelbase = 2.7;
  double length = 4.5;
  double width = 2.0;
  double psi_max = 0.5;
  double a_min = -2.0;
  double a_max = 2.0;
  double psi_dot_max = 1.0;

  friend bool operator==(const VehicleParams&, const VehicleParams&) = default;
};

// Kinematic bicycle, rear-axle reference point, world-frame heading.
struct VehicleState {
  double p_x = 0.0;
  double p_y = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double psi = 0.0;
  Control u;  // last applied

  friend bool operator==(const VehicleState&, const VehicleState&) = default;
};

Control clamp_control(Control u, const VehicleParams& params);

// One forward-Euler step. Out-of-range inputs are clamped with a warning.
VehicleState step_vehicle(const VehicleState& x, Control u, double dt,
                          const VehicleParams& params = {});

Vec2 footprint_center(const VehicleState& x, const VehicleParams& params);
OrientedBox footprint(const VehicleState& x, const VehicleParams& params);

}  // namespace ltlmcts::sim
