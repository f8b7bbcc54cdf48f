#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cranesim/scenario.hpp"

namespace cranesim {

// Exponential decay fit over the peaks of a rectified oscillation:
// zeta = delta / (2 pi) with delta the per-period log decrement.
struct DecayFit {
    double sigma;    // decay rate of the peak envelope [1/s]
    double omega_d;  // damped frequency from the peak spacing [rad/s]
    double zeta;     // sigma * (2 pi / omega_d) / (2 pi) = sigma / omega_d
    int n_peaks;
};

struct Peak {
    double t;
    double value;  // rectified amplitude
};

std::vector<Peak> find_rectified_peaks(std::span<const double> t, std::span<const double> x,
                                       double floor);

std::optional<DecayFit> fit_log_decrement(std::span<const double> t, std::span<const double> x,
                                          double floor);

struct MetricsReport {
    std::string scenario_id;
    std::uint64_t seed = 0;

    // first time after which |L_bar - L*|/L* stays below 5%; empty = NotConverged
    std::optional<double> length_convergence_time;
    double final_length_error_pct = 0.0;

    // log-decrement damping fit over the post-activation peaks of phi_x
    std::optional<double> zeta_fit;

    // 2% band settling against the final reference; error at the last sample
    std::optional<double> tip_settling_time;
    double tip_steady_state_error = 0.0;

    double angle_rms_deg = 0.0;  // EKF angle estimation error, both channels

    bool not_converged() const {
        return !length_convergence_time.has_value() || !tip_settling_time.has_value();
    }
};

inline constexpr double kLengthConvergenceBand = 0.05;
inline constexpr double kSettlingBand = 0.02;

MetricsReport evaluate_metrics(const RunResult& run);

std::string format_metrics(const MetricsReport& m);

}  // namespace cranesim
