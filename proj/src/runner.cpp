#include <cmath>

#include "cranesim/rng.hpp"
#include "cranesim/scenario.hpp"

namespace cranesim {

namespace {

Eigen::Vector2d reference_at(double t, const Eigen::Vector2d& initial_tip,
                             const std::vector<Waypoint>& waypoints) {
    Eigen::Vector2d ref = initial_tip;
    for (const auto& wp : waypoints) {
        if (t + 1e-12 >= wp.t) ref = {wp.x, wp.y};
    }
    return ref;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();

    RunResult out;
    out.meta = {cfg.id, cfg.seed, cfg.payload.cable_length, cfg.damping_on_time};

    SimState state;
    state.joints = cfg.initial_joints;
    state.payload = cfg.initial_payload;

    GaussianRng rng(cfg.seed);

    EkfParams ekf_params = cfg.ekf;
    ekf_params.dt = cfg.control_period;
    ekf_params.gravity = cfg.payload.gravity;
    EkfState ekf;
    ekf.P = cfg.ekf_p0_diag.asDiagonal();

    LengthEstimatorParams est_params = cfg.estimator;
    est_params.gravity = cfg.payload.gravity;
    LengthEstimatorState est =
        LengthEstimatorState::init(cfg.estimator_L0, cfg.estimator_gamma0, est_params);

    const PlantParams plant{cfg.actuator_tau, kDefaultConeEps};

    const Eigen::Vector2d initial_tip =
        forward_kinematics(cfg.initial_joints, cfg.geometry).p05.head<2>();

    const int steps_per_tick =
        static_cast<int>(std::llround(cfg.control_period / cfg.physics_dt));
    const int n_ticks = static_cast<int>(std::floor(cfg.duration / cfg.control_period + 1e-9));

    Eigen::Vector2d accel_prev = Eigen::Vector2d::Zero();
    bool frozen = false;

    out.trace.reserve(static_cast<std::size_t>(n_ticks));
    for (int k = 0; k < n_ticks; ++k) {
        const double t = k * cfg.control_period;
        const bool damping = cfg.damping_on_time >= 0.0 && t + 1e-9 >= cfg.damping_on_time;
        if (damping && cfg.freeze_estimate_on_damping) frozen = true;

        try {
            const VisionResult vision =
                vision_measurement(state.joints, state.payload, cfg.rig, cfg.geometry, rng);

            ekf = ekf_predict(ekf, ekf_params, accel_prev, est.L_bar);
            if (vision.ok) ekf = ekf_update(ekf, ekf_params, vision.y);

            const Eigen::Vector2d ref = reference_at(t, initial_tip, cfg.waypoints);
            const ControlCommand cmd = control_tick(
                {ekf.z(2), ekf.z(3)}, est.L_bar, state.joints, cfg.geometry, ref,
                Eigen::Vector2d::Zero(), cfg.gains, state.vloop, damping,
                cfg.payload.gravity, cfg.control_period);
            state.vloop = cmd.vloop;

            if (!frozen) {
                const auto [z, psi] = filter_signals(ekf.z(0), ekf.z(2), cmd.accel.y(), est,
                                                     est_params, cfg.control_period);
                estimator_step(est, est_params, z, psi, cfg.control_period);
            }

            const TipPose tip = forward_kinematics(state.joints, cfg.geometry);
            TraceRecord r;
            r.t = t;
            r.phi_x = state.payload.phi_x;
            r.phi_y = state.payload.phi_y;
            r.phidot_x = state.payload.phidot_x;
            r.phidot_y = state.payload.phidot_y;
            r.phi_x_hat = ekf.z(0);
            r.phi_y_hat = ekf.z(1);
            r.phidot_x_hat = ekf.z(2);
            r.phidot_y_hat = ekf.z(3);
            r.n_x_hat = ekf.z(4);
            r.n_y_hat = ekf.z(5);
            r.y1 = vision.ok ? vision.y(0) : NAN;
            r.y2 = vision.ok ? vision.y(1) : NAN;
            r.sigma4_m1 = vision.ok ? vision.sigma4_m1 : NAN;
            r.sigma4_m2 = vision.ok ? vision.sigma4_m2 : NAN;
            r.x5 = tip.p05.x();
            r.y5 = tip.p05.y();
            r.z5 = tip.p05.z();
            r.x_ref = ref.x();
            r.y_ref = ref.y();
            r.v_x = state.vloop.v.x();
            r.v_y = state.vloop.v.y();
            r.w_x = state.vloop.w.x();
            r.w_y = state.vloop.w.y();
            r.vdot_x = cmd.accel.x();
            r.vdot_y = cmd.accel.y();
            r.eta = est.eta;
            r.gamma = est.gamma;
            r.L_est = est.length();
            r.L_bar = est.L_bar;
            r.damping_on = damping ? 1 : 0;
            r.estimate_frozen = frozen ? 1 : 0;
            r.vision_ok = vision.ok ? 1 : 0;
            out.trace.push_back(r);

            accel_prev = cmd.accel;
            for (int i = 0; i < steps_per_tick; ++i) {
                step_ground_truth(state, cmd.joint_rates, cmd.accel, cfg.payload, plant,
                                  cfg.geometry, cfg.physics_dt);
            }
        } catch (const ConeSingularity& e) {
            out.aborted = true;
            out.abort_reason = e.what();
            break;
        } catch (const SingularConfiguration& e) {
            out.aborted = true;
            out.abort_reason = e.what();
            break;
        } catch (const OutOfReach& e) {
            out.aborted = true;
            out.abort_reason = e.what();
            break;
        }
    }
    return out;
}

}  // namespace cranesim
