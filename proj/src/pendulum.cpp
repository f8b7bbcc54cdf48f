#include "cranesim/pendulum.hpp"

#include <cmath>

namespace cranesim {

Eigen::Vector2d pendulum_accel(const PendulumState& s, const Eigen::Vector2d& tip_accel,
                               double cable_length, double gravity, double cone_eps) {
    if (std::abs(s.phi_y) >= 0.5 * M_PI - cone_eps) {
        throw ConeSingularity("phi_y = " + std::to_string(s.phi_y) +
                              " rad reached the cable cone singularity");
    }
    const double sx = std::sin(s.phi_x), cx = std::cos(s.phi_x);
    const double sy = std::sin(s.phi_y), cy = std::cos(s.phi_y);
    const double L = cable_length;
    const double w0sq = gravity / L;
    const double vdx = tip_accel.x(), vdy = tip_accel.y();

    const double acc_x =
        (2.0 * s.phidot_x * s.phidot_y * sy + vdy * cx / L - w0sq * sx) / cy;
    const double acc_y =
        -w0sq * cx * sy - s.phidot_x * s.phidot_x * sy * cy - (vdx * cy + vdy * sx * sy) / L;
    return {acc_x, acc_y};
}

namespace {

Eigen::Vector4d deriv(const Eigen::Vector4d& x, const Eigen::Vector2d& a, double L, double g,
                      double cone_eps) {
    PendulumState s{x(0), x(1), x(2), x(3)};
    const Eigen::Vector2d acc = pendulum_accel(s, a, L, g, cone_eps);
    return {x(2), x(3), acc(0), acc(1)};
}

}  // namespace

PendulumState pendulum_rk4_step(const PendulumState& s, const Eigen::Vector2d& tip_accel,
                                double cable_length, double gravity, double dt, double cone_eps) {
    const Eigen::Vector4d x0(s.phi_x, s.phi_y, s.phidot_x, s.phidot_y);
    const Eigen::Vector4d k1 = deriv(x0, tip_accel, cable_length, gravity, cone_eps);
    const Eigen::Vector4d k2 = deriv(x0 + 0.5 * dt * k1, tip_accel, cable_length, gravity, cone_eps);
    const Eigen::Vector4d k3 = deriv(x0 + 0.5 * dt * k2, tip_accel, cable_length, gravity, cone_eps);
    const Eigen::Vector4d k4 = deriv(x0 + dt * k3, tip_accel, cable_length, gravity, cone_eps);
    const Eigen::Vector4d x1 = x0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    return {x1(0), x1(1), x1(2), x1(3)};
}

Eigen::Vector3d cable_direction(double phi_x, double phi_y) {
    const double sx = std::sin(phi_x), cx = std::cos(phi_x);
    const double sy = std::sin(phi_y), cy = std::cos(phi_y);
    return {sy, -sx * cy, cx * cy};
}

double pendulum_energy(const PendulumState& s, double mass, double cable_length, double gravity) {
    // payload velocity = omega x (R06 L e3) with the tip at rest
    const Eigen::Vector3d omega(s.phidot_x, s.phidot_y * std::cos(s.phi_x),
                                s.phidot_y * std::sin(s.phi_x));
    const Eigen::Vector3d arm = cable_direction(s.phi_x, s.phi_y) * cable_length;
    const double v2 = omega.cross(arm).squaredNorm();
    // inertial z points along gravity, so depth below the tip is +arm.z()
    return 0.5 * mass * v2 - mass * gravity * arm.z();
}

}  // namespace cranesim
