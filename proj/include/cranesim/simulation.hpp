#pragma once

#include <Eigen/Dense>

#include "cranesim/controller.hpp"
#include "cranesim/geometry.hpp"
#include "cranesim/kinematics.hpp"
#include "cranesim/pendulum.hpp"

namespace cranesim {

// Ground-truth closed-loop state: crane joints with their actual rates,
// payload angles, and the velocity-loop state carried between control ticks.
struct SimState {
    JointState joints;
    PendulumState payload;
    VelocityLoopState vloop;
    double t = 0.0;
};

struct PlantParams {
    double actuator_tau = 0.02;  // first-order joint-rate lag [s]
    double cone_eps = kDefaultConeEps;
};

// Advances truth by one physics step: joint rates follow the commanded rates
// through the actuator lag (exact first-order discretization, positions get
// the exact integral of the lagged rate), actuator extensions stop at their
// admissible end stops, and the payload is integrated by RK4 with the
// commanded tip acceleration held over the step. The vertical tip velocity
// command is identically zero, so the payload model's flat-tip assumption
// holds by construction.
void step_ground_truth(SimState& state, const Eigen::Vector3d& joint_rate_cmd,
                       const Eigen::Vector2d& tip_accel, const PayloadParams& payload,
                       const PlantParams& plant, const CraneGeometry& geom, double dt);

}  // namespace cranesim
