#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "uvdose/errors.hpp"
#include "uvdose/geometry.hpp"
#include "uvdose/kdtree.hpp"
#include "uvdose/surface.hpp"

namespace uvdose {

struct TrajectorySegment {
    Pose pose;
    double arc_length = 0.0;  // m, distance traveled from the previous segment
};

/// Ordered end-effector poses over a surface, each held at `standoff` from its
/// nearest surface point. These are the dwell positions of the speed LP.
struct ScanTrajectory {
    std::vector<TrajectorySegment> segments;
    double standoff = 0.3;
};

using ReachablePredicate = std::function<bool(const Pose&)>;

struct ScanPathParams {
    double standoff = 0.3;       // m from the surface
    double row_spacing = 0.135;  // m between sweep rows; defaults to the lamp length
    double waypoint_step = 0.0;  // m minimum spacing along a row; 0 keeps every point
    double standoff_tol = 0.005; // m, adjustment target for the nearest-surface distance
};

/// Lawnmower sweep over the cloud's dominant plane. Waypoints start at
/// point + standoff * normal with the assembly z axis aimed along -normal,
/// then get pushed along the nearest-surface direction until the distance to
/// the cloud is standoff within tolerance (bumps would otherwise pull
/// neighboring waypoints inside the standoff shell). Waypoints failing
/// `reachable` are dropped.
inline ScanTrajectory generate_scan_trajectory(const SurfaceCloud& cloud,
                                               const ScanPathParams& params,
                                               const ReachablePredicate& reachable) {
    if (cloud.points.empty()) {
        throw EmptyRegion("cannot plan over an empty cloud");
    }

    const std::size_t n = cloud.points.size();
    std::vector<Point3> positions(n);
    Point3 centroid = Point3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        positions[i] = cloud.points[i].position;
        centroid += positions[i];
    }
    centroid /= static_cast<double>(n);

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Point3& p : positions) {
        const Vec3 d = p - centroid;
        cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    const Vec3 e1 = solver.eigenvectors().col(2);  // largest spread: sweep direction
    const Vec3 e2 = solver.eigenvectors().col(1);  // row direction

    struct Keyed {
        std::size_t idx;
        double u, v;
    };
    std::vector<Keyed> keyed(n);
    double v_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 d = positions[i] - centroid;
        keyed[i] = {i, d.dot(e1), d.dot(e2)};
        v_min = std::min(v_min, keyed[i].v);
    }
    const double spacing = std::max(params.row_spacing, 1e-6);
    std::sort(keyed.begin(), keyed.end(), [&](const Keyed& a, const Keyed& b) {
        const auto row_a = static_cast<long>(std::floor((a.v - v_min) / spacing));
        const auto row_b = static_cast<long>(std::floor((b.v - v_min) / spacing));
        if (row_a != row_b) return row_a < row_b;
        const bool reversed = (row_a % 2) != 0;  // serpentine
        if (a.u != b.u) return reversed ? a.u > b.u : a.u < b.u;
        return a.idx < b.idx;
    });

    // decimate along each row
    std::vector<std::size_t> selected;
    long current_row = std::numeric_limits<long>::min();
    double last_u = 0.0;
    for (const Keyed& kd : keyed) {
        const auto row = static_cast<long>(std::floor((kd.v - v_min) / spacing));
        if (row != current_row || params.waypoint_step <= 0.0 ||
            std::abs(kd.u - last_u) >= params.waypoint_step) {
            selected.push_back(kd.idx);
            current_row = row;
            last_u = kd.u;
        }
    }

    KdTree3 surface_tree(positions);
    ScanTrajectory traj;
    traj.standoff = params.standoff;
    Point3 prev_pos;
    bool have_prev = false;
    for (std::size_t si = 0; si < selected.size(); ++si) {
        const SurfacePoint& sp = cloud.points[selected[si]];
        Point3 w = sp.position + params.standoff * sp.normal;
        for (int iter = 0; iter < 20; ++iter) {
            const auto [idx, dist] = surface_tree.nearest(w);
            if (std::abs(dist - params.standoff) <= params.standoff_tol) {
                break;
            }
            const Vec3 away = dist > 1e-9 ? Vec3((w - positions[idx]) / dist) : sp.normal;
            w += (params.standoff - dist) * away;
        }

        Vec3 travel = e1;
        if (si + 1 < selected.size()) {
            const Vec3 d = cloud.points[selected[si + 1]].position - sp.position;
            if (d.squaredNorm() > 1e-12) travel = d;
        }
        const Pose pose = pose_facing(w, -sp.normal, travel);
        if (!reachable || reachable(pose)) {
            TrajectorySegment seg;
            seg.pose = pose;
            seg.arc_length = have_prev ? (pose.translation - prev_pos).norm() : 0.0;
            traj.segments.push_back(seg);
            prev_pos = pose.translation;
            have_prev = true;
        }
    }
    if (traj.segments.empty()) {
        throw NoReachablePoses("reachability predicate rejected every waypoint");
    }
    return traj;
}

inline ScanTrajectory generate_scan_trajectory(const SurfaceCloud& cloud, double standoff,
                                               const ReachablePredicate& reachable) {
    ScanPathParams params;
    params.standoff = standoff;
    return generate_scan_trajectory(cloud, params, reachable);
}

}  // namespace uvdose
