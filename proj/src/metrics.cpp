#include "cranesim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cranesim {

std::vector<Peak> find_rectified_peaks(std::span<const double> t, std::span<const double> x,
                                       double floor) {
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double a = std::abs(x[i]);
        if (a >= floor && a > std::abs(x[i - 1]) && a >= std::abs(x[i + 1])) {
            peaks.push_back({t[i], a});
        }
    }
    return peaks;
}

std::optional<DecayFit> fit_log_decrement(std::span<const double> t, std::span<const double> x,
                                          double floor) {
    const auto peaks = find_rectified_peaks(t, x, floor);
    if (peaks.size() < 4) return std::nullopt;

    // least squares on ln(A) vs t gives the envelope decay rate
    const double n = static_cast<double>(peaks.size());
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    for (const auto& p : peaks) {
        const double l = std::log(p.value);
        st += p.t;
        sl += l;
        stt += p.t * p.t;
        stl += p.t * l;
    }
    const double denom = n * stt - st * st;
    if (!(std::abs(denom) > 0.0)) return std::nullopt;
    const double slope = (n * stl - st * sl) / denom;

    // rectified peaks are half a period apart
    const double mean_spacing = (peaks.back().t - peaks.front().t) / (n - 1.0);
    if (!(mean_spacing > 0.0)) return std::nullopt;

    DecayFit fit;
    fit.sigma = -slope;
    fit.omega_d = M_PI / mean_spacing;
    fit.zeta = fit.sigma / fit.omega_d;
    fit.n_peaks = static_cast<int>(peaks.size());
    return fit;
}

MetricsReport evaluate_metrics(const RunResult& run) {
    const auto& trace = run.trace;
    if (trace.empty()) throw ConfigError("cannot evaluate metrics on an empty trace");

    MetricsReport m;
    m.scenario_id = run.meta.scenario_id;
    m.seed = run.meta.seed;

    // --- cable length convergence ---------------------------------------
    const double L_true = run.meta.true_length;
    {
        int first_ok = -1;
        for (int i = static_cast<int>(trace.size()) - 1; i >= 0; --i) {
            if (std::abs(trace[i].L_bar - L_true) / L_true < kLengthConvergenceBand) {
                first_ok = i;
            } else {
                break;
            }
        }
        if (first_ok >= 0) m.length_convergence_time = trace[first_ok].t;
        m.final_length_error_pct = 100.0 * std::abs(trace.back().L_bar - L_true) / L_true;
    }

    // --- damping decay fit ------------------------------------------------
    {
        std::vector<double> t, phi;
        for (const auto& r : trace) {
            if (r.damping_on) {
                t.push_back(r.t);
                phi.push_back(r.phi_x);
            }
        }
        if (!t.empty()) {
            double amax = 0.0;
            for (double v : phi) amax = std::max(amax, std::abs(v));
            const double floor = std::max(0.02 * amax, 1e-4);
            if (auto fit = fit_log_decrement(t, phi, floor)) m.zeta_fit = fit->zeta;
        }
    }

    // --- tip settling -------------------------------------------------------
    {
        std::size_t step_idx = 0;
        for (std::size_t i = 1; i < trace.size(); ++i) {
            if (trace[i].x_ref != trace[i - 1].x_ref || trace[i].y_ref != trace[i - 1].y_ref)
                step_idx = i;
        }
        const Eigen::Vector2d ref_final(trace.back().x_ref, trace.back().y_ref);
        const Eigen::Vector2d p_start(trace[step_idx].x5, trace[step_idx].y5);
        const double band = std::max(kSettlingBand * (ref_final - p_start).norm(), 1e-3);

        int settle_idx = -1;
        for (int i = static_cast<int>(trace.size()) - 1; i >= static_cast<int>(step_idx); --i) {
            const Eigen::Vector2d p(trace[i].x5, trace[i].y5);
            if ((p - ref_final).norm() <= band) {
                settle_idx = i;
            } else {
                break;
            }
        }
        if (settle_idx >= 0) m.tip_settling_time = trace[settle_idx].t;
        const Eigen::Vector2d p_last(trace.back().x5, trace.back().y5);
        m.tip_steady_state_error = (p_last - ref_final).norm();
    }

    // --- EKF angle estimation error -----------------------------------------
    {
        double acc = 0.0;
        for (const auto& r : trace) {
            const double ex = r.phi_x - r.phi_x_hat;
            const double ey = r.phi_y - r.phi_y_hat;
            acc += 0.5 * (ex * ex + ey * ey);
        }
        m.angle_rms_deg = std::sqrt(acc / static_cast<double>(trace.size())) * 180.0 / M_PI;
    }

    return m;
}

std::string format_metrics(const MetricsReport& m) {
    std::ostringstream os;
    os << "scenario: " << m.scenario_id << "\n";
    os << "seed: " << m.seed << "\n";
    os << "length_convergence_time_s: ";
    if (m.length_convergence_time)
        os << *m.length_convergence_time;
    else
        os << "NotConverged";
    os << "\n";
    os << "final_length_error_pct: " << m.final_length_error_pct << "\n";
    os << "zeta_fit: ";
    if (m.zeta_fit)
        os << *m.zeta_fit;
    else
        os << "n/a";
    os << "\n";
    os << "tip_settling_time_s: ";
    if (m.tip_settling_time)
        os << *m.tip_settling_time;
    else
        os << "NotConverged";
    os << "\n";
    os << "tip_steady_state_error_m: " << m.tip_steady_state_error << "\n";
    os << "angle_rms_deg: " << m.angle_rms_deg << "\n";
    return os.str();
}

}  // namespace cranesim
