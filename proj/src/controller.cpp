#include "cranesim/controller.hpp"

#include <algorithm>
#include <cmath>

namespace cranesim {

Eigen::Vector2d damping_accel(const Eigen::Vector2d& phidot, double L, double gravity,
                              double zeta, const Eigen::Vector2d& u) {
    const double omega0 = std::sqrt(gravity / L);
    const double k = 2.0 * L * zeta * omega0;
    return {k * phidot.y() + u.x(), -k * phidot.x() + u.y()};
}

Eigen::Vector2d outer_pd(const Eigen::Vector2d& tip_xy, const Eigen::Vector2d& tip_vel_xy,
                         const Eigen::Vector2d& ref_xy, const Eigen::Vector2d& ref_vel_xy,
                         double kp, double kd) {
    return kp * (ref_xy - tip_xy) + kd * (ref_vel_xy - tip_vel_xy);
}

VelocityLoopResult velocity_loop_step(const VelocityLoopState& vls,
                                      const Eigen::Vector2d& accel_cmd, double T_v, double v_max,
                                      double dt) {
    VelocityLoopResult out;
    out.state.w = vls.w + accel_cmd * dt;
    // anti-windup clamp on the integrator
    const double w_lim = 1.5 * v_max;
    out.state.w = out.state.w.cwiseMax(-w_lim).cwiseMin(w_lim);

    const double decay = std::exp(-dt / T_v);
    out.state.v = out.state.w + (vls.v - out.state.w) * decay;
    out.state.v = out.state.v.cwiseMax(-v_max).cwiseMin(v_max);

    out.accel = (out.state.v - vls.v) / dt;
    return out;
}

ControlCommand control_tick(const Eigen::Vector2d& phidot_est, double L_bar,
                            const JointState& joints, const CraneGeometry& geom,
                            const Eigen::Vector2d& ref_xy, const Eigen::Vector2d& ref_vel_xy,
                            const ControllerGains& gains, const VelocityLoopState& vls,
                            bool damping_on, double gravity, double dt) {
    const double omega0 = std::sqrt(gravity / L_bar);

    const TipPose tip = forward_kinematics(joints, geom);
    const Eigen::Vector3d tip_vel = tip_jacobian(joints, geom) * joints.rates();

    const Eigen::Vector2d u = outer_pd(tip.p05.head<2>(), tip_vel.head<2>(), ref_xy, ref_vel_xy,
                                       gains.kp(omega0), gains.kd(omega0));

    ControlCommand cmd;
    cmd.accel_cmd = damping_on ? damping_accel(phidot_est, L_bar, gravity, gains.zeta, u) : u;

    const VelocityLoopResult loop = velocity_loop_step(vls, cmd.accel_cmd, gains.T_v, gains.v_max, dt);
    cmd.vloop = loop.state;
    cmd.accel = loop.accel;

    cmd.joint_rates =
        joint_rates_from_tip_velocity(loop.state.v, joints, geom, gains.cond_threshold);
    return cmd;
}

}  // namespace cranesim
