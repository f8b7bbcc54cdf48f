#pragma once

#include <utility>

#include "cranesim/errors.hpp"

namespace cranesim {

struct LengthEstimatorParams {
    double lambda0 = 1.0;   // filter pole of Lambda(s) = s + lambda0 [1/s]
    double beta = 0.5;      // forgetting factor [1/s]
    double L_min = 0.3;     // [m]
    double L_max = 1.5;     // [m]
    double tau_Lbar = 2.0;  // output low-pass time constant [s]
    double gravity = 9.81;  // [m/s^2]

    void validate() const {
        if (!(L_max > L_min && L_min > 0.0))
            throw ConfigError("length bounds must satisfy 0 < L_min < L_max");
        if (!(lambda0 > 0.0 && beta > 0.0 && tau_Lbar > 0.0))
            throw ConfigError("estimator filter constants must be positive");
    }
};

struct LengthEstimatorState {
    double eta = 1.0;     // estimate of 1/L [1/m]
    double gamma = 100.0; // adaptive gain
    double xf_z = 0.0;    // 1/(s+lambda0) state on phidot_x
    double xf_psi = 0.0;  // 1/(s+lambda0) state on -g phi_x + vdot_y
    double L_bar = 1.0;   // low-pass filtered length estimate [m]

    double length() const { return 1.0 / eta; }

    static LengthEstimatorState init(double L0, double gamma0, const LengthEstimatorParams& p) {
        if (!(L0 >= p.L_min && L0 <= p.L_max))
            throw ConfigError("initial length guess must lie within [L_min, L_max]");
        if (!(gamma0 > 0.0)) throw ConfigError("initial adaptive gain must be positive");
        LengthEstimatorState st;
        st.eta = 1.0 / L0;
        st.gamma = gamma0;
        st.L_bar = L0;
        return st;
    }
};

// Realizes z = [s phidot_x]/(s+lambda0) and psi = [-g phi_x + vdot_y]/(s+lambda0)
// with exactly discretized first-order filters; no numerical differentiation.
// Outputs are sampled at the current instant, then the filter states advance
// by dt with the inputs held.
std::pair<double, double> filter_signals(double phi_x, double phidot_x, double vdot_y,
                                         LengthEstimatorState& st,
                                         const LengthEstimatorParams& p, double dt);

// Admissible-set function g and its gradient for eta in [1/L_max, 1/L_min].
std::pair<double, double> constraint_g(double eta, double L_min, double L_max);

// One forward-Euler step of the least-squares law with projection.
void estimator_step(LengthEstimatorState& st, const LengthEstimatorParams& p, double z,
                    double psi, double dt);

}  // namespace cranesim
