#pragma once

#include <Eigen/Dense>

#include "cranesim/errors.hpp"
#include "cranesim/kinematics.hpp"

namespace cranesim {

struct ControllerGains {
    double zeta = 0.2;     // inner-loop relative damping
    double zeta_s = 1.0;   // outer-loop damping, [0.7, 1]
    double k_s = 5.0;      // bandwidth separation, omega_s = omega0 / k_s
    double T_v = 0.1;      // velocity-loop time constant [s]
    double v_max = 0.5;    // velocity command saturation [m/s]
    double cond_threshold = 1e6;

    void validate() const {
        if (!(k_s >= 5.0)) throw ConfigError("k_s must be >= 5 for loop separation");
        if (!(zeta > 0.0 && zeta <= 1.0)) throw ConfigError("zeta must be in (0, 1]");
        if (!(zeta_s >= 0.7 && zeta_s <= 1.0)) throw ConfigError("zeta_s must be in [0.7, 1]");
        if (!(T_v > 0.0 && v_max > 0.0)) throw ConfigError("T_v and v_max must be positive");
    }

    double kp(double omega0) const {
        const double ws = omega0 / k_s;
        return ws * ws;
    }
    double kd(double omega0) const { return 2.0 * zeta_s * omega0 / k_s; }
};

struct VelocityLoopState {
    Eigen::Vector2d w = Eigen::Vector2d::Zero();  // integrated acceleration command [m/s]
    Eigen::Vector2d v = Eigen::Vector2d::Zero();  // loop output, the commanded tip velocity [m/s]
};

// Inner-loop damping feedback on the cable angular rates plus the outer-loop
// command u; returns the commanded planar tip acceleration.
Eigen::Vector2d damping_accel(const Eigen::Vector2d& phidot, double L, double gravity,
                              double zeta, const Eigen::Vector2d& u);

// Outer PD loop on the crane tip position.
Eigen::Vector2d outer_pd(const Eigen::Vector2d& tip_xy, const Eigen::Vector2d& tip_vel_xy,
                         const Eigen::Vector2d& ref_xy, const Eigen::Vector2d& ref_vel_xy,
                         double kp, double kd);

struct VelocityLoopResult {
    VelocityLoopState state;
    // mean dv/dt over the step; this is the acceleration the velocity loop
    // actually realizes and what the plant, EKF and estimator consume
    Eigen::Vector2d accel;
};

VelocityLoopResult velocity_loop_step(const VelocityLoopState& vls,
                                      const Eigen::Vector2d& accel_cmd, double T_v, double v_max,
                                      double dt);

struct ControlCommand {
    Eigen::Vector3d joint_rates = Eigen::Vector3d::Zero();  // commanded (qd1, qd2, qd3)
    Eigen::Vector2d accel_cmd = Eigen::Vector2d::Zero();    // input into the velocity loop
    Eigen::Vector2d accel = Eigen::Vector2d::Zero();        // realized vdot, routed to the models
    VelocityLoopState vloop;
};

// One cascade tick: outer PD -> optional damping feedback -> velocity loop ->
// joint-space inverse velocity map.
ControlCommand control_tick(const Eigen::Vector2d& phidot_est, double L_bar,
                            const JointState& joints, const CraneGeometry& geom,
                            const Eigen::Vector2d& ref_xy, const Eigen::Vector2d& ref_vel_xy,
                            const ControllerGains& gains, const VelocityLoopState& vls,
                            bool damping_on, double gravity, double dt);

}  // namespace cranesim
