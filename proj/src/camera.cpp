#include "cranesim/camera.hpp"

#include <cmath>
#include <optional>

#include "cranesim/errors.hpp"

namespace cranesim {

std::array<CameraModel, 3> CameraRig::cameras(const Eigen::Matrix3d& R01) const {
    const Eigen::Matrix3d R_0ci = R01 * rot_x(0.5 * M_PI).transpose() * rot_y(0.5 * M_PI);
    const Eigen::Matrix3d K = intrinsics();

    std::array<CameraModel, 3> cams;
    const double shifts[3] = {0.0, -delta12, -(delta12 + delta23)};
    for (int i = 0; i < 3; ++i) {
        cams[i].K = K;
        cams[i].R_c0 = R_0ci.transpose();
        cams[i].t = Eigen::Vector3d(shifts[i], 0.0, 0.0);
        cams[i].width = width;
        cams[i].height = height;
    }
    return cams;
}

MarkerPair marker_world_positions(const JointState& joints, const PendulumState& payload,
                                  const CameraRig& rig, const CraneGeometry& geom) {
    const FrameChain fc = frame_chain(joints, geom);
    const Eigen::Vector3d p_c1_to_tip = fc.tip - rig.camera1_position(fc.R01);
    const Eigen::Vector3d dir = cable_direction(payload.phi_x, payload.phi_y);
    return {p_c1_to_tip + rig.marker_delta1 * dir, p_c1_to_tip + rig.marker_delta2 * dir};
}

ProjectedPixel project_marker(const Eigen::Vector3d& x, const CameraModel& cam) {
    const Eigen::Vector3d in_cam = cam.R_c0 * x + cam.t;
    if (!(in_cam.z() > 0.0)) {
        throw BehindCamera("marker depth " + std::to_string(in_cam.z()) + " m is not positive");
    }
    const Eigen::Vector3d h = cam.K * in_cam;
    const Eigen::Vector2d uv(h.x() / h.z(), h.y() / h.z());
    const bool in_frame = uv.x() >= 0.0 && uv.x() <= cam.width - 1.0 && uv.y() >= 0.0 &&
                          uv.y() <= cam.height - 1.0;
    return {uv, in_frame};
}

PixelObservation synthesize_observations(const JointState& joints, const PendulumState& payload,
                                         const CameraRig& rig, const CraneGeometry& geom,
                                         GaussianRng& rng) {
    const FrameChain fc = frame_chain(joints, geom);
    const auto cams = rig.cameras(fc.R01);
    const MarkerPair markers = marker_world_positions(joints, payload, rig, geom);

    PixelObservation obs;
    for (int i = 0; i < 3; ++i) {
        std::optional<Eigen::Vector2d> uv1, uv2;
        try {
            uv1 = project_marker(markers.x1, cams[i]).uv;
        } catch (const BehindCamera&) {
        }
        try {
            uv2 = project_marker(markers.x2, cams[i]).uv;
        } catch (const BehindCamera&) {
        }

        // the noise stream advances regardless of visibility so that a frame
        // dropping out does not shift every later draw
        const Eigen::Vector2d n1(rng.normal(rig.pixel_noise_sigma), rng.normal(rig.pixel_noise_sigma));
        const Eigen::Vector2d n2(rng.normal(rig.pixel_noise_sigma), rng.normal(rig.pixel_noise_sigma));

        bool ok = uv1.has_value() && uv2.has_value();
        Eigen::Vector2d p1 = Eigen::Vector2d::Zero();
        Eigen::Vector2d p2 = Eigen::Vector2d::Zero();
        if (ok) {
            p1 = *uv1 + n1;
            p2 = *uv2 + n2;
            if (rig.quantize) {
                p1 = p1.array().round();
                p2 = p2.array().round();
            }
            auto inside = [&](const Eigen::Vector2d& p) {
                return p.x() >= 0.0 && p.x() <= rig.width - 1.0 && p.y() >= 0.0 &&
                       p.y() <= rig.height - 1.0;
            };
            ok = inside(p1) && inside(p2);
        }
        if (ok && p2.y() < p1.y()) std::swap(p1, p2);  // marker 2 is the lower image point

        obs.marker1[i] = p1;
        obs.marker2[i] = p2;
        obs.valid[i] = ok;
    }
    return obs;
}

Triangulation triangulate_point(const std::array<Eigen::Vector2d, 3>& px,
                                const std::array<bool, 3>& valid,
                                const std::array<CameraModel, 3>& cams) {
    int n = 0;
    for (bool v : valid) n += v ? 1 : 0;
    if (n < 2) {
        throw InsufficientViews("triangulation needs at least 2 valid cameras, got " +
                                std::to_string(n));
    }

    Eigen::MatrixXd A(2 * n, 4);
    int row = 0;
    for (int i = 0; i < 3; ++i) {
        if (!valid[i]) continue;
        const Eigen::Matrix<double, 3, 4> P = cams[i].projection();
        A.row(row++) = px[i].y() * P.row(2) - P.row(1);
        A.row(row++) = P.row(0) - px[i].x() * P.row(2);
    }

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const double sigma4 = sv(3);
    const double sigma3 = sv(2);
    if (!(sigma3 > 0.0) || sigma3 - sigma4 < 1e-9 * sv(0)) {
        throw DegenerateGeometry("triangulation nullspace is ambiguous (sigma3 = " +
                                 std::to_string(sigma3) + ", sigma4 = " + std::to_string(sigma4) +
                                 ")");
    }
    Eigen::Vector4d nu = svd.matrixV().col(3);
    if (std::abs(nu(3)) < 1e-12) {
        throw DegenerateGeometry("triangulated point at infinity");
    }
    return {nu.head<3>() / nu(3), sigma4};
}

Eigen::Vector2d measure_angles(const Eigen::Vector3d& x1, const Eigen::Vector3d& x2) {
    const Eigen::Vector3d d = x2 - x1;
    const double norm = d.norm();
    if (norm <= 1e-9) {
        throw CoincidentMarkers("triangulated markers are " + std::to_string(norm) + " m apart");
    }
    const Eigen::Vector3d r = d / norm;
    const double y1 = std::atan2(-r.y(), r.z());
    const double y2 = std::atan2(r.x(), std::sqrt(r.y() * r.y() + r.z() * r.z()));
    return {y1, y2};
}

VisionResult vision_measurement(const JointState& joints, const PendulumState& payload,
                                const CameraRig& rig, const CraneGeometry& geom,
                                GaussianRng& rng) {
    VisionResult res;
    res.obs = synthesize_observations(joints, payload, rig, geom, rng);
    if (res.obs.valid_count() < 2) return res;

    const FrameChain fc = frame_chain(joints, geom);
    const auto cams = rig.cameras(fc.R01);
    try {
        const Triangulation t1 = triangulate_point(res.obs.marker1, res.obs.valid, cams);
        const Triangulation t2 = triangulate_point(res.obs.marker2, res.obs.valid, cams);
        res.y = measure_angles(t1.point, t2.point);
        res.sigma4_m1 = t1.sigma4;
        res.sigma4_m2 = t2.sigma4;
        res.ok = true;
    } catch (const SimError&) {
        res.ok = false;
    }
    return res;
}

}  // namespace cranesim
