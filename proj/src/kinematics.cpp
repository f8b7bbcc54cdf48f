#include "cranesim/kinematics.hpp"

#include <cmath>

#include "cranesim/errors.hpp"

namespace cranesim {

Eigen::Matrix3d rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d r;
    r << 1, 0, 0, 0, c, -s, 0, s, c;
    return r;
}

Eigen::Matrix3d rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d r;
    r << c, 0, s, 0, 1, 0, -s, 0, c;
    return r;
}

Eigen::Matrix3d rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Eigen::Matrix3d r;
    r << c, -s, 0, s, c, 0, 0, 0, 1;
    return r;
}

AlphaAngle joint_angle_alpha(double q, int joint, const CraneGeometry& geom) {
    const double b1 = geom.b1(joint);
    const double b2 = geom.b2(joint);
    double u = (q * q - b1 * b1 - b2 * b2) / (-2.0 * b1 * b2);
    if (std::abs(u) > 1.0 + 1e-12) {
        throw OutOfReach("actuator extension outside linkage triangle (joint " +
                         std::to_string(joint) + ", q = " + std::to_string(q) + ")");
    }
    u = std::clamp(u, -1.0, 1.0);

    const double offsets = (joint == 2)
                               ? std::atan(geom.e_b2 / geom.a_b2) + std::atan(geom.e_p2 / geom.a_p2) - geom.c2
                               : std::atan(geom.e_b3 / geom.a_b3) + std::atan(geom.e_p3 / geom.a_p3) - geom.c3;

    AlphaAngle out;
    out.alpha = std::acos(u) + offsets;
    // d acos(u)/dq with du/dq = -q/(b1 b2)
    const double root = std::sqrt(std::max(1.0 - u * u, 1e-300));
    out.dalpha_dq = q / (b1 * b2 * root);
    return out;
}

ActuatorRange admissible_range(int joint, const CraneGeometry& geom) {
    const double b1 = geom.b1(joint);
    const double b2 = geom.b2(joint);
    const double lo = std::abs(b1 - b2);
    const double hi = b1 + b2;
    const double margin = 0.01 * (hi - lo);
    return {lo + margin, hi - margin};
}

FrameChain frame_chain(const JointState& q, const CraneGeometry& geom) {
    const AlphaAngle a2 = joint_angle_alpha(q.q2, 2, geom);
    const AlphaAngle a3 = joint_angle_alpha(q.q3, 3, geom);

    const Eigen::Matrix3d R01 = rot_x(M_PI) * rot_z(-0.5 * M_PI) * rot_z(q.q1);
    const Eigen::Matrix3d R12 = rot_x(0.5 * M_PI) * rot_z(a2.alpha);
    const Eigen::Matrix3d R23 = rot_z(a3.alpha);
    const Eigen::Matrix3d R34 = rot_z(geom.theta4);

    const Eigen::Vector3d p12(0, 0, geom.l1);
    const Eigen::Vector3d p23(geom.l2, 0, 0);
    const Eigen::Vector3d p34(geom.l3, 0, 0);
    const Eigen::Vector3d p45(geom.l4, 0, 0);

    FrameChain fc;
    fc.R01 = R01;
    fc.R02 = R01 * R12;
    fc.R03 = fc.R02 * R23;
    fc.R04 = fc.R03 * R34;

    const Eigen::Vector3d p35_local = p34 + R34 * p45;           // in frame 3
    const Eigen::Vector3d p25_local = p23 + R23 * p35_local;     // in frame 2
    const Eigen::Vector3d p15_local = p12 + R12 * p25_local;     // in frame 1

    fc.p35 = fc.R03 * p35_local;
    fc.p25 = fc.R02 * p25_local;
    fc.p15 = R01 * p15_local;
    fc.tip = fc.p15;  // p_01 = 0
    return fc;
}

TipPose forward_kinematics(const JointState& q, const CraneGeometry& geom) {
    return TipPose{frame_chain(q, geom).tip};
}

Eigen::Matrix3d tip_jacobian(const JointState& q, const CraneGeometry& geom) {
    const FrameChain fc = frame_chain(q, geom);
    const Eigen::Vector3d ez(0, 0, 1);
    const Eigen::Vector3d z1 = fc.R01 * ez;
    const Eigen::Vector3d z2 = fc.R02 * ez;
    const Eigen::Vector3d z3 = fc.R03 * ez;

    Eigen::Matrix3d J;
    J.col(0) = z1.cross(fc.p15);
    J.col(1) = z2.cross(fc.p25) * joint_angle_alpha(q.q2, 2, geom).dalpha_dq;
    J.col(2) = z3.cross(fc.p35) * joint_angle_alpha(q.q3, 3, geom).dalpha_dq;
    return J;
}

Eigen::Vector3d joint_rates_from_tip_velocity(const Eigen::Vector2d& v_xy,
                                              const JointState& q,
                                              const CraneGeometry& geom,
                                              double cond_threshold) {
    const Eigen::Matrix3d J = tip_jacobian(q, geom);
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(J, Eigen::ComputeFullU | Eigen::ComputeFullV);
// gcc cannot see the singular values being written inside JacobiSVD::compute
#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wmaybe-uninitialized"
    const double s_max = svd.singularValues()(0);
    const double s_min = svd.singularValues()(2);
#pragma GCC diagnostic pop
    if (!(s_min > 0.0) || s_max / s_min > cond_threshold) {
        throw SingularConfiguration("tip Jacobian condition number " +
                                    std::to_string(s_min > 0.0 ? s_max / s_min : INFINITY) +
                                    " exceeds threshold");
    }
    return svd.solve(Eigen::Vector3d(v_xy.x(), v_xy.y(), 0.0));
}

}  // namespace cranesim
