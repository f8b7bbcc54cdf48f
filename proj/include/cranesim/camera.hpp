#pragma once

#include <array>
#include <utility>

#include <Eigen/Dense>

#include "cranesim/geometry.hpp"
#include "cranesim/kinematics.hpp"
#include "cranesim/pendulum.hpp"
#include "cranesim/rng.hpp"

namespace cranesim {

struct CameraModel {
    Eigen::Matrix3d K = Eigen::Matrix3d::Identity();
    Eigen::Matrix3d R_c0 = Eigen::Matrix3d::Identity();  // inertial -> camera
    Eigen::Vector3d t = Eigen::Vector3d::Zero();          // frame c1 origin in this camera frame
    int width = 1280;
    int height = 720;

    Eigen::Matrix<double, 3, 4> projection() const {
        Eigen::Matrix<double, 3, 4> P;
        P.leftCols<3>() = R_c0;
        P.col(3) = t;
        return K * P;
    }
};

// Three cameras on a rack fixed to the crane king, spaced along the shared
// camera x-axis, all with identical orientation. Marker offsets are measured
// along the cable from the suspension point.
struct CameraRig {
    double focal = 1000.0;  // [px]
    double cx = 640.0;
    double cy = 360.0;
    int width = 1280;
    int height = 720;

    double delta12 = 0.24;  // [m]
    double delta23 = 0.24;  // [m]

    Eigen::Vector3d mount_frame1{0.3, 0.0, 0.711};  // camera 1 position in frame 1 [m]

    double marker_delta1 = 0.3;  // [m] along the cable, marker 1
    double marker_delta2 = 0.6;  // [m] along the cable, marker 2

    double pixel_noise_sigma = 0.0;  // [px]
    bool quantize = false;

    Eigen::Matrix3d intrinsics() const {
        Eigen::Matrix3d K;
        K << focal, 0, cx, 0, focal, cy, 0, 0, 1;
        return K;
    }

    // Camera models for the current slew rotation R01.
    std::array<CameraModel, 3> cameras(const Eigen::Matrix3d& R01) const;

    // p^0_{0,c1} for the current slew rotation.
    Eigen::Vector3d camera1_position(const Eigen::Matrix3d& R01) const {
        return R01 * mount_frame1;
    }

    void validate() const {
        if (!(marker_delta2 > marker_delta1 && marker_delta1 > 0.0))
            throw ConfigError("marker offsets must satisfy 0 < delta1 < delta2");
        if (!(focal > 0.0 && width > 0 && height > 0))
            throw ConfigError("camera intrinsics must be positive");
        if (!(delta12 > 0.0 && delta23 > 0.0))
            throw ConfigError("camera spacings must be positive");
    }
};

// Pixel coordinates of both markers in the three cameras. A camera is valid
// only if both markers project with positive depth and land inside the image.
struct PixelObservation {
    std::array<Eigen::Vector2d, 3> marker1;
    std::array<Eigen::Vector2d, 3> marker2;
    std::array<bool, 3> valid{false, false, false};

    int valid_count() const {
        int n = 0;
        for (bool v : valid) n += v ? 1 : 0;
        return n;
    }
};

struct ProjectedPixel {
    Eigen::Vector2d uv;
    bool in_frame;
};

struct Triangulation {
    Eigen::Vector3d point;  // relative to the camera-1 origin, inertial frame [m]
    double sigma4;          // smallest singular value of the stacked constraints
};

struct MarkerPair {
    Eigen::Vector3d x1;
    Eigen::Vector3d x2;
};

// Marker centers relative to the camera-1 origin, inertial frame.
MarkerPair marker_world_positions(const JointState& joints, const PendulumState& payload,
                                  const CameraRig& rig, const CraneGeometry& geom);

// Pinhole projection; throws BehindCamera for non-positive depth.
ProjectedPixel project_marker(const Eigen::Vector3d& x, const CameraModel& cam);

// Projects both markers into all cameras, applies pixel noise and optional
// quantization, and sorts per camera so that marker 2 is the lower image
// point (larger v).
PixelObservation synthesize_observations(const JointState& joints, const PendulumState& payload,
                                         const CameraRig& rig, const CraneGeometry& geom,
                                         GaussianRng& rng);

// Linear triangulation across the valid cameras. Throws InsufficientViews
// with fewer than two valid cameras and DegenerateGeometry when the
// nullspace direction is ambiguous.
Triangulation triangulate_point(const std::array<Eigen::Vector2d, 3>& px,
                                const std::array<bool, 3>& valid,
                                const std::array<CameraModel, 3>& cams);

// Cable orientation angles from the two triangulated marker positions.
Eigen::Vector2d measure_angles(const Eigen::Vector3d& x1, const Eigen::Vector3d& x2);

// One vision tick: synthesize, triangulate both markers, measure angles.
struct VisionResult {
    Eigen::Vector2d y = Eigen::Vector2d::Zero();
    double sigma4_m1 = 0.0;
    double sigma4_m2 = 0.0;
    bool ok = false;
    PixelObservation obs;
};

VisionResult vision_measurement(const JointState& joints, const PendulumState& payload,
                                const CameraRig& rig, const CraneGeometry& geom,
                                GaussianRng& rng);

}  // namespace cranesim
