#include <doctest.h>

#include <cmath>

#include "cranesim/pendulum.hpp"
#include "cranesim/simulation.hpp"

using namespace cranesim;

namespace {

constexpr double kL = 1.05;
constexpr double kG = 9.81;

PendulumState integrate(PendulumState s, const Eigen::Vector2d& accel, double dt, int steps) {
    for (int i = 0; i < steps; ++i) s = pendulum_rk4_step(s, accel, kL, kG, dt);
    return s;
}

}  // namespace

TEST_CASE("equilibrium stays put") {
    const PendulumState s{};
    const Eigen::Vector2d acc = pendulum_accel(s, {0, 0}, kL, kG);
    CHECK(acc.norm() == 0.0);

    const PendulumState after = integrate(s, {0, 0}, 1e-3, 1000);
    CHECK(after.phi_x == 0.0);
    CHECK(after.phi_y == 0.0);
}

TEST_CASE("plant step with zero commands is a fixed point") {
    const CraneGeometry geom = CraneGeometry::lab_crane();
    SimState state;
    state.joints = {0.4, 0.9, 0.8, 0, 0, 0};
    const SimState before = state;
    for (int i = 0; i < 200; ++i) {
        step_ground_truth(state, Eigen::Vector3d::Zero(), {0, 0}, PayloadParams{}, PlantParams{},
                          geom, 1e-3);
    }
    CHECK(state.joints.q1 == before.joints.q1);
    CHECK(state.joints.q2 == before.joints.q2);
    CHECK(state.joints.q3 == before.joints.q3);
    CHECK(state.payload.phi_x == 0.0);
    CHECK(state.payload.phi_y == 0.0);
    CHECK(state.t == doctest::Approx(0.2));
}

TEST_CASE("hand-evaluated accelerations") {
    // 10 degrees in phi_x, everything else zero
    PendulumState s;
    s.phi_x = 10.0 * M_PI / 180.0;
    const Eigen::Vector2d acc = pendulum_accel(s, {0, 0}, kL, kG);
    CHECK(acc.x() == doctest::Approx(-1.6223701170596063).epsilon(1e-12));
    CHECK(acc.y() == doctest::Approx(0.0));

    // unit x-acceleration of the tip from rest
    const Eigen::Vector2d acc2 = pendulum_accel(PendulumState{}, {1.0, 0.0}, kL, kG);
    CHECK(acc2.x() == doctest::Approx(0.0));
    CHECK(acc2.y() == doctest::Approx(-1.0 / kL).epsilon(1e-12));

    // unit y-acceleration pushes phi_x, not phi_y
    const Eigen::Vector2d acc3 = pendulum_accel(PendulumState{}, {0.0, 1.0}, kL, kG);
    CHECK(acc3.x() == doctest::Approx(1.0 / kL).epsilon(1e-12));
    CHECK(acc3.y() == doctest::Approx(0.0));
}

TEST_CASE("cone singularity guard") {
    PendulumState s;
    s.phi_y = 0.5 * M_PI - 5e-4;
    CHECK_THROWS_AS(pendulum_accel(s, {0, 0}, kL, kG), ConeSingularity);
}

TEST_CASE("cable direction basics") {
    CHECK((cable_direction(0, 0) - Eigen::Vector3d(0, 0, 1)).norm() == 0.0);
    CHECK((cable_direction(0.5 * M_PI, 0) - Eigen::Vector3d(0, -1, 0)).norm() < 1e-15);
    CHECK((cable_direction(0, 0.5 * M_PI) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);

    for (double px = -1.5; px <= 1.5; px += 0.25) {
        for (double py = -1.5; py <= 1.5; py += 0.25) {
            CHECK(cable_direction(px, py).norm() == doctest::Approx(1.0).epsilon(1e-15));
        }
    }
}

TEST_CASE("small-amplitude period") {
    PendulumState s;
    s.phi_x = 5.0 * M_PI / 180.0;

    // detect two consecutive downward zero crossings of phi_x
    const double dt = 1e-4;
    double prev = s.phi_x;
    double first_cross = -1.0, second_cross = -1.0;
    double t = 0.0;
    for (int i = 0; i < 500000 && second_cross < 0; ++i) {
        s = pendulum_rk4_step(s, {0, 0}, kL, kG, dt);
        t += dt;
        if (prev > 0 && s.phi_x <= 0) {
            if (first_cross < 0)
                first_cross = t;
            else
                second_cross = t;
        }
        prev = s.phi_x;
    }
    REQUIRE(second_cross > 0);
    const double period = second_cross - first_cross;
    const double ideal = 2.0 * M_PI * std::sqrt(kL / kG);
    CHECK(period == doctest::Approx(ideal).epsilon(0.005));
}

TEST_CASE("undriven energy drift stays below 1e-6 relative over 60 s") {
    PendulumState s;
    s.phi_x = 15.0 * M_PI / 180.0;
    s.phi_y = 7.0 * M_PI / 180.0;
    s.phidot_y = 0.3;
    const double m = 12.7;
    const double e0 = pendulum_energy(s, m, kL, kG);
    double max_drift = 0.0;
    for (int i = 0; i < 60000; ++i) {
        s = pendulum_rk4_step(s, {0, 0}, kL, kG, 1e-3);
        max_drift = std::max(max_drift, std::abs(pendulum_energy(s, m, kL, kG) - e0));
    }
    CHECK(max_drift / std::abs(e0) < 1e-6);
}

TEST_CASE("planar motion stays planar") {
    PendulumState s;
    s.phi_x = 12.0 * M_PI / 180.0;
    for (int i = 0; i < 20000; ++i) {
        s = pendulum_rk4_step(s, {0, 0}, kL, kG, 1e-3);
        CHECK(std::abs(s.phi_y) < 1e-12);
        CHECK(std::abs(s.phidot_y) < 1e-12);
    }
}

TEST_CASE("rk4 order: halving dt shrinks the endpoint error 16x") {
    auto endpoint = [](double dt) {
        PendulumState s;
        s.phi_x = 20.0 * M_PI / 180.0;
        s.phi_y = 5.0 * M_PI / 180.0;
        const int steps = static_cast<int>(std::llround(10.0 / dt));
        for (int i = 0; i < steps; ++i) s = pendulum_rk4_step(s, {0.1, -0.05}, kL, kG, dt);
        return Eigen::Vector4d(s.phi_x, s.phi_y, s.phidot_x, s.phidot_y);
    };
    const Eigen::Vector4d c = endpoint(4e-3);
    const Eigen::Vector4d f = endpoint(2e-3);
    const Eigen::Vector4d ff = endpoint(1e-3);
    const double ratio = (c - f).norm() / (f - ff).norm();
    CHECK(ratio > 16.0 * 0.8);
    CHECK(ratio < 16.0 * 1.2);
}
