#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cranesim/cable_estimator.hpp"
#include "cranesim/camera.hpp"
#include "cranesim/controller.hpp"
#include "cranesim/ekf.hpp"
#include "cranesim/kinematics.hpp"
#include "cranesim/metrics.hpp"
#include "cranesim/pendulum.hpp"
#include "cranesim/rng.hpp"
#include "cranesim/scenario.hpp"
#include "cranesim/simulation.hpp"
#include "cranesim/sweep.hpp"

#include <fstream>
#include <sstream>

namespace py = pybind11;
using namespace pybind11::literals;
using namespace cranesim;

namespace {

py::dict trace_columns(const RunResult& run) {
    const auto n = static_cast<py::ssize_t>(run.trace.size());
    py::dict out;
    auto fill = [&](const char* name, auto getter) {
        py::array_t<double> col(n);
        auto view = col.mutable_unchecked<1>();
        for (py::ssize_t i = 0; i < n; ++i) view(i) = getter(run.trace[static_cast<std::size_t>(i)]);
        out[name] = col;
    };
    fill("t", [](const TraceRecord& r) { return r.t; });
    fill("phi_x", [](const TraceRecord& r) { return r.phi_x; });
    fill("phi_y", [](const TraceRecord& r) { return r.phi_y; });
    fill("phidot_x", [](const TraceRecord& r) { return r.phidot_x; });
    fill("phidot_y", [](const TraceRecord& r) { return r.phidot_y; });
    fill("phi_x_hat", [](const TraceRecord& r) { return r.phi_x_hat; });
    fill("phi_y_hat", [](const TraceRecord& r) { return r.phi_y_hat; });
    fill("phidot_x_hat", [](const TraceRecord& r) { return r.phidot_x_hat; });
    fill("phidot_y_hat", [](const TraceRecord& r) { return r.phidot_y_hat; });
    fill("n_x_hat", [](const TraceRecord& r) { return r.n_x_hat; });
    fill("n_y_hat", [](const TraceRecord& r) { return r.n_y_hat; });
    fill("y1", [](const TraceRecord& r) { return r.y1; });
    fill("y2", [](const TraceRecord& r) { return r.y2; });
    fill("sigma4_m1", [](const TraceRecord& r) { return r.sigma4_m1; });
    fill("sigma4_m2", [](const TraceRecord& r) { return r.sigma4_m2; });
    fill("x5", [](const TraceRecord& r) { return r.x5; });
    fill("y5", [](const TraceRecord& r) { return r.y5; });
    fill("z5", [](const TraceRecord& r) { return r.z5; });
    fill("x_ref", [](const TraceRecord& r) { return r.x_ref; });
    fill("y_ref", [](const TraceRecord& r) { return r.y_ref; });
    fill("v_x", [](const TraceRecord& r) { return r.v_x; });
    fill("v_y", [](const TraceRecord& r) { return r.v_y; });
    fill("w_x", [](const TraceRecord& r) { return r.w_x; });
    fill("w_y", [](const TraceRecord& r) { return r.w_y; });
    fill("vdot_x", [](const TraceRecord& r) { return r.vdot_x; });
    fill("vdot_y", [](const TraceRecord& r) { return r.vdot_y; });
    fill("eta", [](const TraceRecord& r) { return r.eta; });
    fill("gamma", [](const TraceRecord& r) { return r.gamma; });
    fill("L_est", [](const TraceRecord& r) { return r.L_est; });
    fill("L_bar", [](const TraceRecord& r) { return r.L_bar; });
    fill("damping_on", [](const TraceRecord& r) { return double(r.damping_on); });
    fill("estimate_frozen", [](const TraceRecord& r) { return double(r.estimate_frozen); });
    fill("vision_ok", [](const TraceRecord& r) { return double(r.vision_ok); });
    return out;
}

}  // namespace

PYBIND11_MODULE(_cranesim, m) {
    m.doc() = "Crane anti-sway simulation lab: kinematics, payload dynamics, camera "
              "triangulation, EKF, cable length estimation and the cascade controller";
    m.attr("__version__") = "0.1.0";

    py::register_exception<SimError>(m, "SimError");
    py::register_exception<OutOfReach>(m, "OutOfReach");
    py::register_exception<SingularConfiguration>(m, "SingularConfiguration");
    py::register_exception<ConeSingularity>(m, "ConeSingularity");
    py::register_exception<InsufficientViews>(m, "InsufficientViews");
    py::register_exception<ConfigError>(m, "ConfigError");

    py::class_<CraneGeometry>(m, "CraneGeometry")
        .def(py::init<>())
        .def_readwrite("l1", &CraneGeometry::l1)
        .def_readwrite("l2", &CraneGeometry::l2)
        .def_readwrite("l3", &CraneGeometry::l3)
        .def_readwrite("l4", &CraneGeometry::l4)
        .def_readwrite("a_b2", &CraneGeometry::a_b2)
        .def_readwrite("e_b2", &CraneGeometry::e_b2)
        .def_readwrite("a_p2", &CraneGeometry::a_p2)
        .def_readwrite("e_p2", &CraneGeometry::e_p2)
        .def_readwrite("a_b3", &CraneGeometry::a_b3)
        .def_readwrite("e_b3", &CraneGeometry::e_b3)
        .def_readwrite("a_p3", &CraneGeometry::a_p3)
        .def_readwrite("e_p3", &CraneGeometry::e_p3)
        .def_readwrite("theta4", &CraneGeometry::theta4)
        .def("b1", &CraneGeometry::b1, "joint"_a)
        .def("b2", &CraneGeometry::b2, "joint"_a)
        .def_static("lab_crane", &CraneGeometry::lab_crane);

    py::class_<JointState>(m, "JointState")
        .def(py::init<>())
        .def(py::init([](double q1, double q2, double q3, double qd1, double qd2, double qd3) {
                 return JointState{q1, q2, q3, qd1, qd2, qd3};
             }),
             "q1"_a, "q2"_a, "q3"_a, "qd1"_a = 0.0, "qd2"_a = 0.0, "qd3"_a = 0.0)
        .def_readwrite("q1", &JointState::q1)
        .def_readwrite("q2", &JointState::q2)
        .def_readwrite("q3", &JointState::q3)
        .def_readwrite("qd1", &JointState::qd1)
        .def_readwrite("qd2", &JointState::qd2)
        .def_readwrite("qd3", &JointState::qd3);

    py::class_<AlphaAngle>(m, "AlphaAngle")
        .def_readonly("alpha", &AlphaAngle::alpha)
        .def_readonly("dalpha_dq", &AlphaAngle::dalpha_dq);

    py::class_<ActuatorRange>(m, "ActuatorRange")
        .def_readonly("q_min", &ActuatorRange::q_min)
        .def_readonly("q_max", &ActuatorRange::q_max);

    py::class_<FrameChain>(m, "FrameChain")
        .def_readonly("R01", &FrameChain::R01)
        .def_readonly("R02", &FrameChain::R02)
        .def_readonly("R03", &FrameChain::R03)
        .def_readonly("R04", &FrameChain::R04)
        .def_readonly("tip", &FrameChain::tip);

    m.def("joint_angle_alpha", &joint_angle_alpha, "q"_a, "joint"_a, "geom"_a);
    m.def("admissible_range", &admissible_range, "joint"_a, "geom"_a);
    m.def("frame_chain", &frame_chain, "joints"_a, "geom"_a);
    m.def(
        "forward_kinematics",
        [](const JointState& q, const CraneGeometry& g) { return forward_kinematics(q, g).p05; },
        "joints"_a, "geom"_a);
    m.def("tip_jacobian", &tip_jacobian, "joints"_a, "geom"_a);
    m.def("joint_rates_from_tip_velocity", &joint_rates_from_tip_velocity, "v_xy"_a, "joints"_a,
          "geom"_a, "cond_threshold"_a = 1e6);

    py::class_<PendulumState>(m, "PendulumState")
        .def(py::init<>())
        .def(py::init([](double px, double py_, double pdx, double pdy) {
                 return PendulumState{px, py_, pdx, pdy};
             }),
             "phi_x"_a = 0.0, "phi_y"_a = 0.0, "phidot_x"_a = 0.0, "phidot_y"_a = 0.0)
        .def_readwrite("phi_x", &PendulumState::phi_x)
        .def_readwrite("phi_y", &PendulumState::phi_y)
        .def_readwrite("phidot_x", &PendulumState::phidot_x)
        .def_readwrite("phidot_y", &PendulumState::phidot_y);

    py::class_<PayloadParams>(m, "PayloadParams")
        .def(py::init<>())
        .def_readwrite("mass", &PayloadParams::mass)
        .def_readwrite("cable_length", &PayloadParams::cable_length)
        .def_readwrite("gravity", &PayloadParams::gravity)
        .def("omega0", &PayloadParams::omega0);

    m.def("pendulum_accel", &pendulum_accel, "state"_a, "tip_accel"_a, "cable_length"_a,
          "gravity"_a, "cone_eps"_a = kDefaultConeEps);
    m.def("pendulum_rk4_step", &pendulum_rk4_step, "state"_a, "tip_accel"_a, "cable_length"_a,
          "gravity"_a, "dt"_a, "cone_eps"_a = kDefaultConeEps);
    m.def("cable_direction", &cable_direction, "phi_x"_a, "phi_y"_a);
    m.def("pendulum_energy", &pendulum_energy, "state"_a, "mass"_a, "cable_length"_a, "gravity"_a);

    py::class_<GaussianRng>(m, "GaussianRng")
        .def(py::init<std::uint64_t>(), "seed"_a)
        .def("normal", &GaussianRng::normal, "sigma"_a);

    py::class_<CameraModel>(m, "CameraModel")
        .def_readonly("K", &CameraModel::K)
        .def_readonly("R_c0", &CameraModel::R_c0)
        .def_readonly("t", &CameraModel::t)
        .def("projection", &CameraModel::projection);

    py::class_<CameraRig>(m, "CameraRig")
        .def(py::init<>())
        .def_readwrite("focal", &CameraRig::focal)
        .def_readwrite("cx", &CameraRig::cx)
        .def_readwrite("cy", &CameraRig::cy)
        .def_readwrite("width", &CameraRig::width)
        .def_readwrite("height", &CameraRig::height)
        .def_readwrite("delta12", &CameraRig::delta12)
        .def_readwrite("delta23", &CameraRig::delta23)
        .def_readwrite("mount_frame1", &CameraRig::mount_frame1)
        .def_readwrite("marker_delta1", &CameraRig::marker_delta1)
        .def_readwrite("marker_delta2", &CameraRig::marker_delta2)
        .def_readwrite("pixel_noise_sigma", &CameraRig::pixel_noise_sigma)
        .def_readwrite("quantize", &CameraRig::quantize)
        .def("cameras", &CameraRig::cameras, "R01"_a);

    py::class_<PixelObservation>(m, "PixelObservation")
        .def_readonly("marker1", &PixelObservation::marker1)
        .def_readonly("marker2", &PixelObservation::marker2)
        .def_readonly("valid", &PixelObservation::valid);

    m.def(
        "marker_world_positions",
        [](const JointState& j, const PendulumState& p, const CameraRig& rig,
           const CraneGeometry& g) {
            const MarkerPair mp = marker_world_positions(j, p, rig, g);
            return std::make_pair(mp.x1, mp.x2);
        },
        "joints"_a, "payload"_a, "rig"_a, "geom"_a);
    m.def(
        "project_marker",
        [](const Eigen::Vector3d& x, const CameraModel& cam) {
            const ProjectedPixel px = project_marker(x, cam);
            return std::make_pair(px.uv, px.in_frame);
        },
        "point"_a, "camera"_a);
    m.def("synthesize_observations", &synthesize_observations, "joints"_a, "payload"_a, "rig"_a,
          "geom"_a, "rng"_a);
    m.def(
        "triangulate_point",
        [](const std::array<Eigen::Vector2d, 3>& px, const std::array<bool, 3>& valid,
           const std::array<CameraModel, 3>& cams) {
            const Triangulation tr = triangulate_point(px, valid, cams);
            return std::make_pair(tr.point, tr.sigma4);
        },
        "pixels"_a, "valid"_a, "cameras"_a);
    m.def("measure_angles", &measure_angles, "x1"_a, "x2"_a);

    py::class_<EkfParams>(m, "EkfParams")
        .def(py::init<>())
        .def_readwrite("Q", &EkfParams::Q)
        .def_readwrite("R", &EkfParams::R)
        .def_readwrite("dt", &EkfParams::dt)
        .def_readwrite("gravity", &EkfParams::gravity);

    py::class_<EkfState>(m, "EkfState")
        .def(py::init<>())
        .def_readwrite("z", &EkfState::z)
        .def_readwrite("P", &EkfState::P)
        .def_readonly("innovation", &EkfState::innovation);

    m.def("process_model", &process_model, "z"_a, "a"_a, "L"_a, "gravity"_a, "dt"_a,
          "cone_eps"_a = 1e-3);
    m.def("ekf_predict", &ekf_predict, "state"_a, "params"_a, "a"_a, "L"_a);
    m.def("ekf_update", &ekf_update, "state"_a, "params"_a, "y"_a);

    py::class_<LengthEstimatorParams>(m, "LengthEstimatorParams")
        .def(py::init<>())
        .def_readwrite("lambda0", &LengthEstimatorParams::lambda0)
        .def_readwrite("beta", &LengthEstimatorParams::beta)
        .def_readwrite("L_min", &LengthEstimatorParams::L_min)
        .def_readwrite("L_max", &LengthEstimatorParams::L_max)
        .def_readwrite("tau_Lbar", &LengthEstimatorParams::tau_Lbar)
        .def_readwrite("gravity", &LengthEstimatorParams::gravity);

    py::class_<LengthEstimatorState>(m, "LengthEstimatorState")
        .def(py::init<>())
        .def_static("init", &LengthEstimatorState::init, "L0"_a, "gamma0"_a, "params"_a)
        .def_readwrite("eta", &LengthEstimatorState::eta)
        .def_readwrite("gamma", &LengthEstimatorState::gamma)
        .def_readwrite("L_bar", &LengthEstimatorState::L_bar)
        .def("length", &LengthEstimatorState::length);

    m.def("filter_signals", &filter_signals, "phi_x"_a, "phidot_x"_a, "vdot_y"_a, "state"_a,
          "params"_a, "dt"_a);
    m.def("constraint_g", &constraint_g, "eta"_a, "L_min"_a, "L_max"_a);
    m.def("estimator_step", &estimator_step, "state"_a, "params"_a, "z"_a, "psi"_a, "dt"_a);

    py::class_<ControllerGains>(m, "ControllerGains")
        .def(py::init<>())
        .def_readwrite("zeta", &ControllerGains::zeta)
        .def_readwrite("zeta_s", &ControllerGains::zeta_s)
        .def_readwrite("k_s", &ControllerGains::k_s)
        .def_readwrite("T_v", &ControllerGains::T_v)
        .def_readwrite("v_max", &ControllerGains::v_max)
        .def("kp", &ControllerGains::kp, "omega0"_a)
        .def("kd", &ControllerGains::kd, "omega0"_a);

    py::class_<VelocityLoopState>(m, "VelocityLoopState")
        .def(py::init<>())
        .def_readwrite("w", &VelocityLoopState::w)
        .def_readwrite("v", &VelocityLoopState::v);

    m.def("damping_accel", &damping_accel, "phidot"_a, "L"_a, "gravity"_a, "zeta"_a, "u"_a);
    m.def("outer_pd", &outer_pd, "tip_xy"_a, "tip_vel_xy"_a, "ref_xy"_a, "ref_vel_xy"_a, "kp"_a,
          "kd"_a);
    m.def(
        "velocity_loop_step",
        [](const VelocityLoopState& vls, const Eigen::Vector2d& accel_cmd, double T_v,
           double v_max, double dt) {
            const VelocityLoopResult r = velocity_loop_step(vls, accel_cmd, T_v, v_max, dt);
            return std::make_pair(r.state, r.accel);
        },
        "state"_a, "accel_cmd"_a, "T_v"_a, "v_max"_a, "dt"_a);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("id", &ScenarioConfig::id)
        .def_readwrite("duration", &ScenarioConfig::duration)
        .def_readwrite("seed", &ScenarioConfig::seed)
        .def_readwrite("geometry", &ScenarioConfig::geometry)
        .def_readwrite("payload", &ScenarioConfig::payload)
        .def_readwrite("rig", &ScenarioConfig::rig)
        .def_readwrite("initial_joints", &ScenarioConfig::initial_joints)
        .def_readwrite("initial_payload", &ScenarioConfig::initial_payload)
        .def_readwrite("gains", &ScenarioConfig::gains)
        .def_readwrite("damping_on_time", &ScenarioConfig::damping_on_time)
        .def("validate", &ScenarioConfig::validate);

    py::class_<SimState>(m, "SimState")
        .def(py::init<>())
        .def_readwrite("joints", &SimState::joints)
        .def_readwrite("payload", &SimState::payload)
        .def_readwrite("t", &SimState::t);

    py::class_<PlantParams>(m, "PlantParams")
        .def(py::init<>())
        .def_readwrite("actuator_tau", &PlantParams::actuator_tau);

    m.def("step_ground_truth", &step_ground_truth, "state"_a, "joint_rate_cmd"_a, "tip_accel"_a,
          "payload"_a, "plant"_a, "geom"_a, "dt"_a);

    m.def("parse_scenario_text", &parse_scenario_text, "text"_a);
    m.def("load_scenario_file", &load_scenario_file, "path"_a);
    m.def("apply_override", &apply_override, "config"_a, "key"_a, "value"_a);

    py::class_<RunResult>(m, "RunResult")
        .def_readonly("aborted", &RunResult::aborted)
        .def_readonly("abort_reason", &RunResult::abort_reason)
        .def("columns", &trace_columns)
        .def("__len__", [](const RunResult& r) { return r.trace.size(); });

    m.def("run_scenario", &run_scenario, "config"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "write_trace_csv",
        [](const RunResult& run, const std::string& path) {
            std::ofstream os(path);
            if (!os) throw ConfigError("cannot write trace to '" + path + "'");
            write_trace_csv(run, os);
        },
        "run"_a, "path"_a);
    m.def(
        "read_trace_csv",
        [](const std::string& path) {
            std::ifstream is(path);
            if (!is) throw ConfigError("cannot open trace '" + path + "'");
            return read_trace_csv(is);
        },
        "path"_a);

    py::class_<MetricsReport>(m, "MetricsReport")
        .def_readonly("scenario_id", &MetricsReport::scenario_id)
        .def_readonly("seed", &MetricsReport::seed)
        .def_readonly("length_convergence_time", &MetricsReport::length_convergence_time)
        .def_readonly("final_length_error_pct", &MetricsReport::final_length_error_pct)
        .def_readonly("zeta_fit", &MetricsReport::zeta_fit)
        .def_readonly("tip_settling_time", &MetricsReport::tip_settling_time)
        .def_readonly("tip_steady_state_error", &MetricsReport::tip_steady_state_error)
        .def_readonly("angle_rms_deg", &MetricsReport::angle_rms_deg)
        .def("not_converged", &MetricsReport::not_converged);

    m.def("evaluate_metrics", &evaluate_metrics, "run"_a);
    m.def("format_metrics", &format_metrics, "metrics"_a);
}
