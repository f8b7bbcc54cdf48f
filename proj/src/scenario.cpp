#include "cranesim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace cranesim {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream iss(s);
    std::string tok;
    while (iss >> tok) out.push_back(tok);
    return out;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
    }
}

std::vector<double> parse_doubles(const std::string& key, const std::string& value, std::size_t n) {
    const auto toks = split_ws(value);
    if (toks.size() != n) {
        throw ConfigError("key '" + key + "': expected " + std::to_string(n) + " values, got " +
                          std::to_string(toks.size()));
    }
    std::vector<double> out;
    out.reserve(n);
    for (const auto& t : toks) out.push_back(parse_double(key, t));
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError("key '" + key + "': expected an integer");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false");
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> m;
        auto num = [&m](const std::string& key, double ScenarioConfig::* field) {
            m[key] = [field](ScenarioConfig& c, const std::string& k, const std::string& v) {
                c.*field = parse_double(k, v);
            };
        };

        m["run.id"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            if (v.find_first_of(" \t") != std::string::npos)
                throw ConfigError("key '" + k + "': scenario id must not contain whitespace");
            c.id = v;
        };
        num("run.duration", &ScenarioConfig::duration);
        m["run.seed"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.seed = static_cast<std::uint64_t>(parse_double(k, v));
        };
        num("run.physics_dt", &ScenarioConfig::physics_dt);
        num("run.control_period", &ScenarioConfig::control_period);
        num("run.actuator_tau", &ScenarioConfig::actuator_tau);

        auto geo = [&m](const std::string& key, double CraneGeometry::* field) {
            m["geometry." + key] = [field](ScenarioConfig& c, const std::string& k,
                                           const std::string& v) {
                c.geometry.*field = parse_double(k, v);
            };
        };
        geo("l1", &CraneGeometry::l1);
        geo("l2", &CraneGeometry::l2);
        geo("l3", &CraneGeometry::l3);
        geo("l4", &CraneGeometry::l4);
        geo("a_b2", &CraneGeometry::a_b2);
        geo("e_b2", &CraneGeometry::e_b2);
        geo("a_p2", &CraneGeometry::a_p2);
        geo("e_p2", &CraneGeometry::e_p2);
        geo("a_b3", &CraneGeometry::a_b3);
        geo("e_b3", &CraneGeometry::e_b3);
        geo("a_p3", &CraneGeometry::a_p3);
        geo("e_p3", &CraneGeometry::e_p3);
        geo("c2", &CraneGeometry::c2);
        geo("c3", &CraneGeometry::c3);
        m["geometry.theta4_deg"] = [](ScenarioConfig& c, const std::string& k,
                                      const std::string& v) {
            c.geometry.theta4 = parse_double(k, v) * kDegToRad;
        };

        auto pay = [&m](const std::string& key, double PayloadParams::* field) {
            m["payload." + key] = [field](ScenarioConfig& c, const std::string& k,
                                          const std::string& v) {
                c.payload.*field = parse_double(k, v);
            };
        };
        pay("mass", &PayloadParams::mass);
        pay("cable_length", &PayloadParams::cable_length);
        pay("gravity", &PayloadParams::gravity);

        auto rig = [&m](const std::string& key, double CameraRig::* field) {
            m["rig." + key] = [field](ScenarioConfig& c, const std::string& k,
                                      const std::string& v) {
                c.rig.*field = parse_double(k, v);
            };
        };
        rig("focal", &CameraRig::focal);
        rig("cx", &CameraRig::cx);
        rig("cy", &CameraRig::cy);
        rig("delta12", &CameraRig::delta12);
        rig("delta23", &CameraRig::delta23);
        rig("marker_delta1", &CameraRig::marker_delta1);
        rig("marker_delta2", &CameraRig::marker_delta2);
        rig("pixel_noise_sigma", &CameraRig::pixel_noise_sigma);
        m["rig.width"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.rig.width = parse_int(k, v);
        };
        m["rig.height"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.rig.height = parse_int(k, v);
        };
        m["rig.quantize"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.rig.quantize = parse_bool(k, v);
        };
        m["rig.mount_x"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.rig.mount_frame1.x() = parse_double(k, v);
        };
        m["rig.mount_y"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.rig.mount_frame1.y() = parse_double(k, v);
        };
        m["rig.mount_z"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.rig.mount_frame1.z() = parse_double(k, v);
        };

        m["initial.q1"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.initial_joints.q1 = parse_double(k, v);
        };
        m["initial.q2"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.initial_joints.q2 = parse_double(k, v);
        };
        m["initial.q3"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            c.initial_joints.q3 = parse_double(k, v);
        };
        m["initial.phi_x_deg"] = [](ScenarioConfig& c, const std::string& k,
                                    const std::string& v) {
            c.initial_payload.phi_x = parse_double(k, v) * kDegToRad;
        };
        m["initial.phi_y_deg"] = [](ScenarioConfig& c, const std::string& k,
                                    const std::string& v) {
            c.initial_payload.phi_y = parse_double(k, v) * kDegToRad;
        };
        m["initial.phidot_x_deg"] = [](ScenarioConfig& c, const std::string& k,
                                       const std::string& v) {
            c.initial_payload.phidot_x = parse_double(k, v) * kDegToRad;
        };
        m["initial.phidot_y_deg"] = [](ScenarioConfig& c, const std::string& k,
                                       const std::string& v) {
            c.initial_payload.phidot_y = parse_double(k, v) * kDegToRad;
        };

        m["reference.waypoint"] = [](ScenarioConfig& c, const std::string& k,
                                     const std::string& v) {
            const auto vals = parse_doubles(k, v, 3);
            c.waypoints.push_back({vals[0], vals[1], vals[2]});
        };

        auto ctl = [&m](const std::string& key, double ControllerGains::* field) {
            m["controller." + key] = [field](ScenarioConfig& c, const std::string& k,
                                             const std::string& v) {
                c.gains.*field = parse_double(k, v);
            };
        };
        ctl("zeta", &ControllerGains::zeta);
        ctl("zeta_s", &ControllerGains::zeta_s);
        ctl("k_s", &ControllerGains::k_s);
        ctl("T_v", &ControllerGains::T_v);
        ctl("v_max", &ControllerGains::v_max);
        ctl("cond_threshold", &ControllerGains::cond_threshold);

        auto est = [&m](const std::string& key, double LengthEstimatorParams::* field) {
            m["estimator." + key] = [field](ScenarioConfig& c, const std::string& k,
                                            const std::string& v) {
                c.estimator.*field = parse_double(k, v);
            };
        };
        est("beta", &LengthEstimatorParams::beta);
        est("lambda0", &LengthEstimatorParams::lambda0);
        est("L_min", &LengthEstimatorParams::L_min);
        est("L_max", &LengthEstimatorParams::L_max);
        est("tau_Lbar", &LengthEstimatorParams::tau_Lbar);
        num("estimator.L0", &ScenarioConfig::estimator_L0);
        num("estimator.gamma0", &ScenarioConfig::estimator_gamma0);

        m["ekf.q_diag"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            const auto vals = parse_doubles(k, v, 6);
            c.ekf.Q = Eigen::Map<const Vector6>(vals.data()).asDiagonal();
        };
        m["ekf.r"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            const auto vals = parse_doubles(k, v, 3);
            c.ekf.R << vals[0], vals[1], vals[1], vals[2];
        };
        m["ekf.p0_diag"] = [](ScenarioConfig& c, const std::string& k, const std::string& v) {
            const auto vals = parse_doubles(k, v, 6);
            c.ekf_p0_diag = Eigen::Map<const Vector6>(vals.data());
        };

        num("events.damping_on", &ScenarioConfig::damping_on_time);
        m["events.freeze_estimate_on_damping"] = [](ScenarioConfig& c, const std::string& k,
                                                    const std::string& v) {
            c.freeze_estimate_on_damping = parse_bool(k, v);
        };
        return m;
    }();
    return table;
}

}  // namespace

void ScenarioConfig::validate() const {
    if (!(duration > 0.0)) throw ConfigError("duration must be positive");
    if (!(physics_dt > 0.0)) throw ConfigError("physics_dt must be positive");
    const double ratio = control_period / physics_dt;
    if (!(ratio >= 1.0) || std::abs(ratio - std::round(ratio)) > 1e-9) {
        throw ConfigError("control_period must be an integer multiple of physics_dt");
    }
    if (!(actuator_tau > 0.0)) throw ConfigError("actuator_tau must be positive");

    geometry.validate();
    payload.validate();
    rig.validate();
    gains.validate();
    estimator.validate();
    if (!(estimator_L0 >= estimator.L_min && estimator_L0 <= estimator.L_max))
        throw ConfigError("estimator L0 must lie within [L_min, L_max]");
    if (!(estimator_gamma0 > 0.0)) throw ConfigError("estimator gamma0 must be positive");
    for (int i = 0; i < 6; ++i) {
        if (ekf_p0_diag(i) < 0.0) throw ConfigError("ekf p0_diag entries must be >= 0");
    }

    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        if (!(waypoints[i].t >= 0.0 && waypoints[i].t <= duration))
            throw ConfigError("waypoint times must lie within the run duration");
        if (i > 0 && !(waypoints[i].t > waypoints[i - 1].t))
            throw ConfigError("waypoint times must be strictly increasing");
    }
    if (damping_on_time > duration)
        throw ConfigError("damping_on time must lie within the run duration");

    for (int joint : {2, 3}) {
        const auto range = admissible_range(joint, geometry);
        const double q = joint == 2 ? initial_joints.q2 : initial_joints.q3;
        if (!(q >= range.q_min && q <= range.q_max)) {
            throw ConfigError("initial q" + std::to_string(joint) + " = " + std::to_string(q) +
                              " outside admissible range [" + std::to_string(range.q_min) + ", " +
                              std::to_string(range.q_max) + "]");
        }
    }
    if (std::abs(initial_payload.phi_y) >= 0.5 * M_PI - kDefaultConeEps)
        throw ConfigError("initial phi_y inside the cone singularity guard");
}

ScenarioConfig parse_scenario_text(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");

        const std::string dotted = section + "." + key;
        const auto it = setters().find(dotted);
        if (it == setters().end())
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + dotted + "'");
        it->second(cfg, dotted, value);
    }
    return cfg;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario_text(ss.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& dotted_key, const std::string& value) {
    const auto it = setters().find(dotted_key);
    if (it == setters().end()) throw ConfigError("unknown override key '" + dotted_key + "'");
    it->second(cfg, dotted_key, value);
}

namespace {

const char* kHeader =
    "t,phi_x,phi_y,phidot_x,phidot_y,phi_x_hat,phi_y_hat,phidot_x_hat,phidot_y_hat,"
    "n_x_hat,n_y_hat,y1,y2,sigma4_m1,sigma4_m2,x5,y5,z5,x_ref,y_ref,"
    "v_x,v_y,w_x,w_y,vdot_x,vdot_y,eta,gamma,L_est,L_bar,"
    "damping_on,estimate_frozen,vision_ok";

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

void write_trace_csv(const RunResult& result, std::ostream& os) {
    os << "# schema=" << kTraceSchemaVersion << " id=" << result.meta.scenario_id
       << " seed=" << result.meta.seed << " L_true=" << fmt9(result.meta.true_length)
       << " damping_on=" << fmt9(result.meta.damping_on_time) << "\n";
    os << kHeader << "\n";
    for (const auto& r : result.trace) {
        const double cols[] = {r.t,        r.phi_x,     r.phi_y,        r.phidot_x,
                               r.phidot_y, r.phi_x_hat, r.phi_y_hat,    r.phidot_x_hat,
                               r.phidot_y_hat, r.n_x_hat, r.n_y_hat,    r.y1,
                               r.y2,       r.sigma4_m1, r.sigma4_m2,    r.x5,
                               r.y5,       r.z5,        r.x_ref,        r.y_ref,
                               r.v_x,      r.v_y,       r.w_x,          r.w_y,
                               r.vdot_x,   r.vdot_y,    r.eta,          r.gamma,
                               r.L_est,    r.L_bar};
        bool first = true;
        for (double c : cols) {
            if (!first) os << ',';
            os << fmt9(c);
            first = false;
        }
        os << ',' << r.damping_on << ',' << r.estimate_frozen << ',' << r.vision_ok << "\n";
    }
}

RunResult read_trace_csv(std::istream& is) {
    RunResult out;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# schema=", 0) != 0)
        throw ConfigError("trace is missing the schema header");
    {
        std::istringstream meta(line.substr(1));
        std::string tok;
        while (meta >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = tok.substr(0, eq);
            const std::string value = tok.substr(eq + 1);
            if (key == "schema" && std::stoi(value) != kTraceSchemaVersion)
                throw ConfigError("unsupported trace schema version " + value);
            if (key == "id") out.meta.scenario_id = value;
            if (key == "seed") out.meta.seed = std::stoull(value);
            if (key == "L_true") out.meta.true_length = std::stod(value);
            if (key == "damping_on") out.meta.damping_on_time = std::stod(value);
        }
    }
    if (!std::getline(is, line) || trim(line) != kHeader)
        throw ConfigError("trace column header does not match schema 1");

    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        std::vector<double> vals;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            auto comma = line.find(',', pos);
            if (comma == std::string::npos) comma = line.size();
            vals.push_back(std::strtod(line.c_str() + pos, nullptr));
            pos = comma + 1;
        }
        if (vals.size() != 33) throw ConfigError("trace row has wrong column count");
        TraceRecord r;
        int i = 0;
        for (double* f : {&r.t,        &r.phi_x,     &r.phi_y,        &r.phidot_x,
                          &r.phidot_y, &r.phi_x_hat, &r.phi_y_hat,    &r.phidot_x_hat,
                          &r.phidot_y_hat, &r.n_x_hat, &r.n_y_hat,    &r.y1,
                          &r.y2,       &r.sigma4_m1, &r.sigma4_m2,    &r.x5,
                          &r.y5,       &r.z5,        &r.x_ref,        &r.y_ref,
                          &r.v_x,      &r.v_y,       &r.w_x,          &r.w_y,
                          &r.vdot_x,   &r.vdot_y,    &r.eta,          &r.gamma,
                          &r.L_est,    &r.L_bar}) {
            *f = vals[i++];
        }
        r.damping_on = static_cast<int>(vals[30]);
        r.estimate_frozen = static_cast<int>(vals[31]);
        r.vision_ok = static_cast<int>(vals[32]);
        out.trace.push_back(r);
    }
    return out;
}

}  // namespace cranesim
