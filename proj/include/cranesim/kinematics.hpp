#pragma once

#include <Eigen/Dense>

#include "cranesim/geometry.hpp"

namespace cranesim {

struct JointState {
    double q1 = 0.0;   // slew angle [rad]
    double q2 = 0.0;   // actuator extension [m]
    double q3 = 0.0;   // actuator extension [m]
    double qd1 = 0.0;  // [rad/s]
    double qd2 = 0.0;  // [m/s]
    double qd3 = 0.0;  // [m/s]

    Eigen::Vector3d rates() const { return {qd1, qd2, qd3}; }
};

struct TipPose {
    Eigen::Vector3d p05 = Eigen::Vector3d::Zero();  // crane tip in the inertial frame [m]
};

struct AlphaAngle {
    double alpha;      // joint rotation produced by the actuator extension [rad]
    double dalpha_dq;  // companion derivative, feeds the Jacobian [rad/m]
};

// Admissible actuator extension window, arccos bound shrunk by a 1% margin.
struct ActuatorRange {
    double q_min;
    double q_max;
};

// Rotation chain and the frame-origin-to-tip vectors needed by the tip
// velocity map (all expressed in the inertial frame).
struct FrameChain {
    Eigen::Matrix3d R01, R02, R03, R04;
    Eigen::Vector3d p15, p25, p35;
    Eigen::Vector3d tip;  // == p15 since the frame-1 origin is the inertial origin
};

Eigen::Matrix3d rot_x(double a);
Eigen::Matrix3d rot_y(double a);
Eigen::Matrix3d rot_z(double a);

AlphaAngle joint_angle_alpha(double q, int joint, const CraneGeometry& geom);
ActuatorRange admissible_range(int joint, const CraneGeometry& geom);

FrameChain frame_chain(const JointState& q, const CraneGeometry& geom);
TipPose forward_kinematics(const JointState& q, const CraneGeometry& geom);

// J maps (qd1, qd2, qd3) to the tip velocity in the inertial frame.
Eigen::Matrix3d tip_jacobian(const JointState& q, const CraneGeometry& geom);

// Inverse velocity map for a commanded planar tip velocity; the vertical
// component is held at zero. Throws SingularConfiguration when cond(J)
// exceeds the threshold.
Eigen::Vector3d joint_rates_from_tip_velocity(const Eigen::Vector2d& v_xy,
                                              const JointState& q,
                                              const CraneGeometry& geom,
                                              double cond_threshold = 1e6);

}  // namespace cranesim
