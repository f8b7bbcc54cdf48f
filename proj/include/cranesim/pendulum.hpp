#pragma once

#include <Eigen/Dense>

#include "cranesim/errors.hpp"

namespace cranesim {

struct PendulumState {
    double phi_x = 0.0;     // [rad]
    double phi_y = 0.0;     // [rad]
    double phidot_x = 0.0;  // [rad/s]
    double phidot_y = 0.0;  // [rad/s]
};

struct PayloadParams {
    double mass = 12.7;         // [kg]
    double cable_length = 1.05; // [m]
    double gravity = 9.81;      // [m/s^2]

    double omega0() const { return std::sqrt(gravity / cable_length); }

    void validate() const {
        if (!(mass > 0.0 && cable_length > 0.0 && gravity > 0.0))
            throw ConfigError("payload mass, cable length and gravity must be positive");
    }
};

inline constexpr double kDefaultConeEps = 1e-3;  // [rad] guard on the cos(phi_y) division

// Angular accelerations of the cable angles for a given planar tip
// acceleration (vdot_x, vdot_y). Throws ConeSingularity near |phi_y| = pi/2.
Eigen::Vector2d pendulum_accel(const PendulumState& s, const Eigen::Vector2d& tip_accel,
                               double cable_length, double gravity,
                               double cone_eps = kDefaultConeEps);

// One classical RK4 step with the tip acceleration held constant.
PendulumState pendulum_rk4_step(const PendulumState& s, const Eigen::Vector2d& tip_accel,
                                double cable_length, double gravity, double dt,
                                double cone_eps = kDefaultConeEps);

// Unit vector from the suspension point toward the payload, inertial frame.
Eigen::Vector3d cable_direction(double phi_x, double phi_y);

// Total mechanical energy with the suspension point at rest; the conserved
// quantity of the undriven pendulum (potential zero at the suspension point).
double pendulum_energy(const PendulumState& s, double mass, double cable_length, double gravity);

}  // namespace cranesim
