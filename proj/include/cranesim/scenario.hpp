#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cranesim/cable_estimator.hpp"
#include "cranesim/camera.hpp"
#include "cranesim/controller.hpp"
#include "cranesim/ekf.hpp"
#include "cranesim/geometry.hpp"
#include "cranesim/pendulum.hpp"
#include "cranesim/simulation.hpp"

namespace cranesim {

struct Waypoint {
    double t;  // [s] time at which the reference steps to (x, y)
    double x;
    double y;
};

struct ScenarioConfig {
    // [run]
    std::string id = "scenario";
    double duration = 30.0;       // [s]
    std::uint64_t seed = 1;
    double physics_dt = 1e-3;     // [s]
    double control_period = 0.05; // [s]
    double actuator_tau = 0.02;   // [s]

    CraneGeometry geometry;  // [geometry]
    PayloadParams payload;   // [payload]

    // [rig] scenario default: rack raised above the king top with the markers
    // spread along the cable, calibrated so all three cameras keep both
    // markers in frame over the working swing range
    CameraRig rig = [] {
        CameraRig r;
        r.mount_frame1 = Eigen::Vector3d(0.3, 0.0, 1.05);
        r.marker_delta1 = 0.5;
        r.marker_delta2 = 1.03;
        r.pixel_noise_sigma = 0.5;
        return r;
    }();

    // [initial] tip at radius 2.0 m, height 1.72 m
    JointState initial_joints{0.4, 1.010754910, 0.849272950, 0.0, 0.0, 0.0};
    PendulumState initial_payload;

    // [reference]
    std::vector<Waypoint> waypoints;

    // [controller]
    ControllerGains gains;

    // [estimator]
    LengthEstimatorParams estimator;
    double estimator_L0 = 1.0;
    double estimator_gamma0 = 100.0;

    // [ekf]
    EkfParams ekf;
    Vector6 ekf_p0_diag = Vector6::Zero();

    // [events]
    double damping_on_time = -1.0;  // negative: damping never activates
    bool freeze_estimate_on_damping = true;

    void validate() const;
};

// Flat key = value scenario format, one section per module; unknown sections
// or keys are rejected. '#' starts a comment.
ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

// Applies "section.key = value" style overrides (used by the sweep grid).
void apply_override(ScenarioConfig& cfg, const std::string& dotted_key, const std::string& value);

struct TraceRecord {
    double t;
    double phi_x, phi_y, phidot_x, phidot_y;                       // truth
    double phi_x_hat, phi_y_hat, phidot_x_hat, phidot_y_hat;       // EKF
    double n_x_hat, n_y_hat;
    double y1, y2;                  // vision measurement (NaN when invalid)
    double sigma4_m1, sigma4_m2;
    double x5, y5, z5;              // true tip position
    double x_ref, y_ref;
    double v_x, v_y, w_x, w_y;      // velocity-loop states
    double vdot_x, vdot_y;          // realized acceleration command
    double eta, gamma, L_est, L_bar;
    int damping_on;
    int estimate_frozen;
    int vision_ok;
};

struct TraceMeta {
    std::string scenario_id;
    std::uint64_t seed = 0;
    double true_length = 0.0;
    double damping_on_time = -1.0;
};

struct RunResult {
    std::vector<TraceRecord> trace;
    TraceMeta meta;
    bool aborted = false;
    std::string abort_reason;
};

RunResult run_scenario(const ScenarioConfig& cfg);

inline constexpr int kTraceSchemaVersion = 1;

void write_trace_csv(const RunResult& result, std::ostream& os);
RunResult read_trace_csv(std::istream& is);

}  // namespace cranesim
