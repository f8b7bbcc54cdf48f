#include "cranesim/simulation.hpp"

#include <algorithm>
#include <cmath>

namespace cranesim {

namespace {

// q += integral of the exponential approach of qd toward the command.
void lag_joint(double& q, double& qd, double cmd, double tau, double dt) {
    const double decay = std::exp(-dt / tau);
    q += cmd * dt + (qd - cmd) * tau * (1.0 - decay);
    qd = cmd + (qd - cmd) * decay;
}

// Actuator end stop: pin the extension and kill its rate.
void end_stop(double& q, double& qd, const ActuatorRange& range) {
    if (q <= range.q_min) {
        q = range.q_min;
        qd = std::max(qd, 0.0);
    } else if (q >= range.q_max) {
        q = range.q_max;
        qd = std::min(qd, 0.0);
    }
}

}  // namespace

void step_ground_truth(SimState& state, const Eigen::Vector3d& joint_rate_cmd,
                       const Eigen::Vector2d& tip_accel, const PayloadParams& payload,
                       const PlantParams& plant, const CraneGeometry& geom, double dt) {
    lag_joint(state.joints.q1, state.joints.qd1, joint_rate_cmd(0), plant.actuator_tau, dt);
    lag_joint(state.joints.q2, state.joints.qd2, joint_rate_cmd(1), plant.actuator_tau, dt);
    lag_joint(state.joints.q3, state.joints.qd3, joint_rate_cmd(2), plant.actuator_tau, dt);
    end_stop(state.joints.q2, state.joints.qd2, admissible_range(2, geom));
    end_stop(state.joints.q3, state.joints.qd3, admissible_range(3, geom));

    state.payload = pendulum_rk4_step(state.payload, tip_accel, payload.cable_length,
                                      payload.gravity, dt, plant.cone_eps);
    state.t += dt;
}

}  // namespace cranesim
