#pragma once

#include <Eigen/Dense>

#include "cranesim/errors.hpp"

namespace cranesim {

using Vector6 = Eigen::Matrix<double, 6, 1>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;

// State ordering: [phi_x, phi_y, phidot_x, phidot_y, n_x, n_y] with n the
// measurement bias pair modeled as a random walk.
struct EkfParams {
    Matrix6 Q = 1e-4 * (Vector6() << 0.3, 0.3, 5.0, 5.0, 1.0, 1.0).finished().asDiagonal();
    Eigen::Matrix2d R =
        1e-3 * (Eigen::Matrix2d() << 3.77597, -2.10312, -2.10312, 1.25147).finished();
    double dt = 0.05;                 // [s]
    double gravity = 9.81;            // [m/s^2]
    double cone_eps = 1e-3;           // [rad]
    double innovation_cond_limit = 1e12;
};

struct EkfState {
    Vector6 z = Vector6::Zero();
    Matrix6 P = Matrix6::Zero();
    Eigen::Vector2d innovation = Eigen::Vector2d::Zero();  // last update residual
    bool has_innovation = false;
};

// Discrete process model z_next = z + f(z, a, L) dt and its analytic
// Jacobian. Throws ConeSingularity at the cable cone guard.
std::pair<Vector6, Matrix6> process_model(const Vector6& z, const Eigen::Vector2d& a, double L,
                                          double gravity, double dt, double cone_eps = 1e-3);

EkfState ekf_predict(const EkfState& s, const EkfParams& p, const Eigen::Vector2d& a, double L);

// Measurement update with y = (y1, y2); H selects angle + bias.
EkfState ekf_update(const EkfState& s, const EkfParams& p, const Eigen::Vector2d& y);

}  // namespace cranesim
