#include "cranesim/cable_estimator.hpp"

#include <algorithm>
#include <cmath>

namespace cranesim {

std::pair<double, double> filter_signals(double phi_x, double phidot_x, double vdot_y,
                                         LengthEstimatorState& st,
                                         const LengthEstimatorParams& p, double dt) {
    // s/(s+l0) = 1 - l0/(s+l0), so z has direct feedthrough of phidot_x
    const double z = phidot_x - p.lambda0 * st.xf_z;
    const double psi = st.xf_psi;

    const double decay = std::exp(-p.lambda0 * dt);
    const double gain = (1.0 - decay) / p.lambda0;  // zero-order hold on the input
    st.xf_z = decay * st.xf_z + gain * phidot_x;
    st.xf_psi = decay * st.xf_psi + gain * (-p.gravity * phi_x + vdot_y);
    return {z, psi};
}

std::pair<double, double> constraint_g(double eta, double L_min, double L_max) {
    const double sum_over_prod = (L_max + L_min) / (L_max * L_min);
    const double g = eta * eta - eta * sum_over_prod + 1.0 / (L_max * L_min);
    const double grad = 2.0 * eta - sum_over_prod;
    return {g, grad};
}

void estimator_step(LengthEstimatorState& st, const LengthEstimatorParams& p, double z,
                    double psi, double dt) {
    const double ms2 = 1.0 + st.gamma * psi * psi;
    const double eps = (z - st.eta * psi) / ms2;
    const auto [g, grad] = constraint_g(st.eta, p.L_min, p.L_max);

    const double eta_dot = st.gamma * eps * psi;
    // the projection keeps g <= 0; treat a rounding-width band as "on the
    // boundary" so the blocked branch is hit exactly there
    const bool on_boundary = g >= -1e-12;
    const bool adapt = !on_boundary || eta_dot * grad <= 0.0;
    if (adapt) {
        const double gamma_dot = p.beta * st.gamma - st.gamma * st.gamma * psi * psi / ms2;
        st.eta += eta_dot * dt;
        st.gamma += gamma_dot * dt;
        // clamp the Euler overshoot back onto the admissible set
        st.eta = std::clamp(st.eta, 1.0 / p.L_max, 1.0 / p.L_min);
        st.gamma = std::max(st.gamma, 1e-12);
    }

    const double alpha = 1.0 - std::exp(-dt / p.tau_Lbar);
    st.L_bar += alpha * (st.length() - st.L_bar);
}

}  // namespace cranesim
