#include "cranesim/ekf.hpp"

#include <cmath>

#include "cranesim/pendulum.hpp"

namespace cranesim {

std::pair<Vector6, Matrix6> process_model(const Vector6& z, const Eigen::Vector2d& a, double L,
                                          double gravity, double dt, double cone_eps) {
    const PendulumState s{z(0), z(1), z(2), z(3)};
    const Eigen::Vector2d acc = pendulum_accel(s, a, L, gravity, cone_eps);

    Vector6 zdot;
    zdot << z(2), z(3), acc(0), acc(1), 0.0, 0.0;

    const double sx = std::sin(z(0)), cx = std::cos(z(0));
    const double sy = std::sin(z(1)), cy = std::cos(z(1));
    const double ty = sy / cy;
    const double w0sq = gravity / L;
    const double pdx = z(2), pdy = z(3);
    const double vdx = a.x(), vdy = a.y();

    Matrix6 A = Matrix6::Zero();
    A(0, 2) = 1.0;
    A(1, 3) = 1.0;
    // rows of the solved accelerations
    A(2, 0) = (-vdy * sx / L - w0sq * cx) / cy;
    A(2, 1) = 2.0 * pdx * pdy + acc(0) * ty;
    A(2, 2) = 2.0 * pdy * ty;
    A(2, 3) = 2.0 * pdx * ty;
    A(3, 0) = w0sq * sx * sy - vdy * cx * sy / L;
    A(3, 1) = -w0sq * cx * cy - pdx * pdx * std::cos(2.0 * z(1)) + (vdx * sy - vdy * sx * cy) / L;
    A(3, 2) = -2.0 * pdx * sy * cy;

    return {z + zdot * dt, Matrix6::Identity() + A * dt};
}

EkfState ekf_predict(const EkfState& s, const EkfParams& p, const Eigen::Vector2d& a, double L) {
    auto [z_next, F] = process_model(s.z, a, L, p.gravity, p.dt, p.cone_eps);
    EkfState out = s;
    out.z = z_next;
    Matrix6 P = F * s.P * F.transpose() + p.Q;
    out.P = 0.5 * (P + P.transpose());
    return out;
}

namespace {

Eigen::Matrix<double, 2, 6> measurement_matrix() {
    Eigen::Matrix<double, 2, 6> H = Eigen::Matrix<double, 2, 6>::Zero();
    H(0, 0) = 1.0;
    H(0, 4) = 1.0;
    H(1, 1) = 1.0;
    H(1, 5) = 1.0;
    return H;
}

}  // namespace

EkfState ekf_update(const EkfState& s, const EkfParams& p, const Eigen::Vector2d& y) {
    const Eigen::Matrix<double, 2, 6> H = measurement_matrix();
    const Eigen::Matrix2d S = p.R + H * s.P * H.transpose();

    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(S);
    const auto& sv = svd.singularValues();
    if (!(sv(1) > 0.0) || sv(0) / sv(1) > p.innovation_cond_limit) {
        throw IllConditionedInnovation("innovation covariance condition number exceeds limit");
    }

    const Eigen::Matrix<double, 6, 2> K = s.P * H.transpose() * S.inverse();
    EkfState out = s;
    out.innovation = y - H * s.z;
    out.has_innovation = true;
    out.z = s.z + K * out.innovation;
    Matrix6 P = (Matrix6::Identity() - K * H) * s.P;
    out.P = 0.5 * (P + P.transpose());
    return out;
}

}  // namespace cranesim
