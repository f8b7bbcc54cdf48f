#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cranesim/camera.hpp"
#include "cranesim/ekf.hpp"
#include "test_util.hpp"

using namespace cranesim;

namespace {

constexpr double kDeg = M_PI / 180.0;
constexpr double kL = 1.05;
constexpr double kG = 9.81;

const CraneGeometry geom = CraneGeometry::lab_crane();

double min_eigenvalue(const Matrix6& P) {
    Eigen::SelfAdjointEigenSolver<Matrix6> es(P);
    return es.eigenvalues().minCoeff();
}

// Rig-consistent filter tuning: the measurement covariance describes the
// synthetic pipeline noise at 0.5 px (the values the shipped scenarios use)
// and the rate channel is loose enough to swallow the coarse-step model.
EkfParams scenario_tuning() {
    EkfParams p;
    p.Q = (Vector6() << 3e-5, 3e-5, 5e-2, 5e-2, 1e-6, 1e-6).finished().asDiagonal();
    p.R << 7.6e-6, -4.9e-6, -4.9e-6, 3.4e-6;
    return p;
}

// R equal to the measured pipeline covariance and a modest rate walk; the
// statistically consistent setting the whiteness check is about.
EkfParams consistent_tuning() {
    EkfParams p;
    p.Q = (Vector6() << 3e-5, 3e-5, 4e-4, 4e-4, 3e-6, 3e-6).finished().asDiagonal();
    p.R << 7.6e-5, -4.9e-5, -4.9e-5, 3.4e-5;
    return p;
}

// Free pendulum truth + synthetic vision + EKF at the control period.
struct FilterLoop {
    JointState pose = testutil::solve_pose(0.4, 2.0, 1.72, geom);
    CameraRig rig;
    EkfParams params = scenario_tuning();
    EkfState ekf;
    PendulumState truth;
    GaussianRng rng{31};
    double y_offset = 0.0;  // constant bias injected into the measurement

    // estimate-vs-truth error sampled at the update instant, before the
    // plant moves on
    double err_sq = 0.0;
    double angle_err = 0.0;

    explicit FilterLoop(double phi0_deg, double noise_px) {
        rig.mount_frame1 = Eigen::Vector3d(0.3, 0.0, 1.05);
        rig.marker_delta1 = 0.5;
        rig.marker_delta2 = 1.03;
        rig.pixel_noise_sigma = noise_px;
        truth.phi_x = phi0_deg * kDeg;
    }

    void tick() {
        const VisionResult vr = vision_measurement(pose, truth, rig, geom, rng);
        ekf = ekf_predict(ekf, params, {0, 0}, kL);
        if (vr.ok) ekf = ekf_update(ekf, params, vr.y + Eigen::Vector2d(y_offset, 0.0));
        const double ex = ekf.z(0) - truth.phi_x;
        const double ey = ekf.z(1) - truth.phi_y;
        err_sq = 0.5 * (ex * ex + ey * ey);
        angle_err = ex;
        for (int i = 0; i < 50; ++i) truth = pendulum_rk4_step(truth, {0, 0}, kL, kG, 1e-3);
    }
};

}  // namespace

TEST_CASE("process model at the equilibrium") {
    auto [z_next, F] = process_model(Vector6::Zero(), {0, 0}, kL, kG, 0.05);
    CHECK(z_next.norm() == 0.0);

    Matrix6 A = Matrix6::Zero();
    A(0, 2) = 1.0;
    A(1, 3) = 1.0;
    A(2, 0) = -kG / kL;
    A(3, 1) = -kG / kL;
    const Matrix6 expected = Matrix6::Identity() + A * 0.05;
    CHECK((F - expected).norm() < 1e-12);
}

TEST_CASE("process jacobian matches finite differences") {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> ang(-0.4, 0.4);
    std::uniform_real_distribution<double> rate(-1.0, 1.0);
    std::uniform_real_distribution<double> acc(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Vector6 z;
        z << ang(eng), ang(eng), rate(eng), rate(eng), ang(eng) * 0.1, ang(eng) * 0.1;
        const Eigen::Vector2d a(acc(eng), acc(eng));

        const Matrix6 F = process_model(z, a, kL, kG, 0.05).second;
        Matrix6 F_fd;
        const double h = 1e-6;
        for (int c = 0; c < 6; ++c) {
            Vector6 zp = z, zm = z;
            zp(c) += h;
            zm(c) -= h;
            F_fd.col(c) = (process_model(zp, a, kL, kG, 0.05).first -
                           process_model(zm, a, kL, kG, 0.05).first) /
                          (2 * h);
        }
        CHECK((F - F_fd).norm() <= 1e-5 * F.norm());

        // bias rows stay identity: the random walk has no dynamics
        CHECK((F.row(4) - Matrix6::Identity().row(4)).norm() == 0.0);
        CHECK((F.row(5) - Matrix6::Identity().row(5)).norm() == 0.0);
    }
}

TEST_CASE("predict from zero covariance") {
    EkfParams p;
    EkfState s;  // z = 0, P = 0
    const EkfState out = ekf_predict(s, p, {0, 0}, kL);
    CHECK(out.z.norm() == 0.0);
    CHECK((out.P - p.Q).norm() < 1e-15);

    // process noise keeps accumulating near the identity transition
    EkfState small = s;
    small.P = Matrix6::Identity() * 1e-6;
    const EkfState grown = ekf_predict(small, p, {0, 0}, kL);
    CHECK(grown.P.trace() >= small.P.trace() + 0.9 * p.Q.trace());
}

TEST_CASE("one predict step from a 5 degree angle") {
    EkfParams p;
    EkfState s;
    s.z(0) = 5.0 * kDeg;
    const EkfState out = ekf_predict(s, p, {0, 0}, kL);
    const double expected_rate = -(kG / kL) * std::sin(5.0 * kDeg) * 0.05;
    CHECK(out.z(2) == doctest::Approx(expected_rate).epsilon(1e-12));
    CHECK(out.z(0) == doctest::Approx(5.0 * kDeg).epsilon(1e-12));  // rate was zero
}

TEST_CASE("update with zero covariance ignores the measurement") {
    EkfParams p;
    EkfState s;
    s.z(0) = 0.1;
    const EkfState out = ekf_update(s, p, {0.5, -0.2});
    CHECK((out.z - s.z).norm() == 0.0);
}

TEST_CASE("huge R drives the gain to zero") {
    EkfParams p;
    EkfState s;
    s.P = Matrix6::Identity() * 1e-2;
    s.z(0) = 0.1;

    EkfParams p_huge = p;
    p_huge.R *= 1e6;
    const EkfState small_gain = ekf_update(s, p_huge, {0.5, -0.2});
    const EkfState normal_gain = ekf_update(s, p, {0.5, -0.2});
    CHECK((small_gain.z - s.z).norm() < 1e-3 * (normal_gain.z - s.z).norm());
}

TEST_CASE("covariance stays symmetric psd over 1e4 cycles") {
    EkfParams p;
    EkfState s;
    GaussianRng rng(8);
    for (int i = 0; i < 10000; ++i) {
        s = ekf_predict(s, p, {0.1 * rng.normal(1.0), 0.1 * rng.normal(1.0)}, kL);
        s = ekf_update(s, p, {0.05 * rng.normal(1.0), 0.05 * rng.normal(1.0)});
        CHECK((s.P - s.P.transpose()).norm() < 1e-10);
        if (i % 100 == 0) CHECK(min_eigenvalue(s.P) > -1e-10);
    }
    CHECK(min_eigenvalue(s.P) > -1e-10);
}

TEST_CASE("filter converges on a free 15 degree oscillation") {
    FilterLoop loop(15.0, 0.5);
    loop.params = consistent_tuning();
    std::vector<double> err_sq;
    for (int k = 0; k < 600; ++k) {  // 30 s
        loop.tick();
        err_sq.push_back(loop.err_sq);
    }
    // RMS error of the estimated angles below 0.5 degrees after 5 s
    double acc = 0.0;
    int n = 0;
    for (std::size_t k = 100; k < err_sq.size(); ++k) {
        acc += err_sq[k];
        ++n;
    }
    const double rms_deg = std::sqrt(acc / n) / kDeg;
    CHECK(rms_deg < 0.5);
}

TEST_CASE("windowed error decreases with clean measurements and exact length") {
    FilterLoop loop(15.0, 0.0);
    loop.params = consistent_tuning();
    std::vector<double> window_rms;
    double acc = 0.0;
    int count = 0;
    for (int k = 0; k < 600; ++k) {  // 30 s in 2 s windows
        loop.tick();
        acc += loop.err_sq;
        if (++count == 40) {
            window_rms.push_back(std::sqrt(acc / count));
            acc = 0.0;
            count = 0;
        }
    }
    REQUIRE(window_rms.size() == 15);
    for (std::size_t w = 1; w < window_rms.size(); ++w) {
        CHECK(window_rms[w] <= window_rms[w - 1] * 1.10);
    }
    CHECK(window_rms.back() < 0.3 * window_rms.front());
}

TEST_CASE("a constant measurement offset migrates into the bias state") {
    FilterLoop loop(15.0, 0.3);
    loop.y_offset = 1.0 * kDeg;
    for (int k = 0; k < 400; ++k) loop.tick();  // 20 s
    CHECK(loop.ekf.z(4) / kDeg == doctest::Approx(1.0).epsilon(0.5));
    for (int k = 0; k < 400; ++k) loop.tick();  // settle to 40 s
    CHECK(loop.ekf.z(4) / kDeg == doctest::Approx(1.0).epsilon(0.25));
    // the angle estimate itself sheds the offset
    CHECK(std::abs(loop.angle_err) / kDeg < 0.5);
}

TEST_CASE("innovations are white once converged") {
    // whiteness is a consistency statement, so the filter runs with R equal
    // to the measured pipeline covariance; both channels are excited
    FilterLoop loop(12.0, 0.5);
    loop.params = consistent_tuning();
    loop.rng = GaussianRng(7);
    loop.truth.phidot_y = 0.45;
    std::vector<Eigen::Vector2d> innov;
    for (int k = 0; k < 1200; ++k) {  // 60 s, keep the last 30 s
        loop.tick();
        if (k >= 600 && loop.ekf.has_innovation) innov.push_back(loop.ekf.innovation);
    }
    REQUIRE(innov.size() > 500);
    for (int ch = 0; ch < 2; ++ch) {
        double mean = 0.0;
        for (const auto& v : innov) mean += v(ch);
        mean /= innov.size();
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i + 1 < innov.size(); ++i) {
            num += (innov[i](ch) - mean) * (innov[i + 1](ch) - mean);
        }
        for (const auto& v : innov) den += (v(ch) - mean) * (v(ch) - mean);
        const double rho = num / den;
        CHECK(std::abs(rho) < 0.2);
    }
}

TEST_CASE("ill conditioned innovation covariance is reported") {
    EkfParams p;
    p.R = Eigen::Matrix2d::Zero();  // degenerate measurement noise
    p.R(0, 0) = 1.0;
    EkfState s;  // P = 0, so S = R is singular
    CHECK_THROWS_AS(ekf_update(s, p, {0.1, 0.1}), IllConditionedInnovation);
}
