#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <cmath>
#include <cstdint>

namespace uvdose {

using Vec3 = Eigen::Vector3d;
using Point3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

enum class RiskClass : std::uint8_t { NonHotspot = 0, Hotspot = 1 };

/// A disinfection target: position and outward unit normal in world frame,
/// risk class, and the dose accumulated so far (mJ/cm^2, starts at zero).
struct SurfacePoint {
    Point3 position{0, 0, 0};
    Vec3 normal{0, 0, 1};
    RiskClass risk = RiskClass::NonHotspot;
    double dose = 0.0;
};

/// Rigid transform: rotation (unit quaternion) followed by translation.
struct Pose {
    Point3 translation{0, 0, 0};
    Quat rotation{1, 0, 0, 0};

    static Pose identity() { return Pose{}; }

    Point3 apply(const Point3& p) const { return rotation * p + translation; }

    Vec3 rotate(const Vec3& v) const { return rotation * v; }

    Pose inverse() const {
        const Quat inv_r = rotation.conjugate();
        return Pose{inv_r * (-translation), inv_r};
    }

    Pose compose(const Pose& other) const {
        return Pose{rotation * other.translation + translation,
                    (rotation * other.rotation).normalized()};
    }
};

inline Point3 transform_point(const Pose& pose, const Point3& p) { return pose.apply(p); }

/// Express a world-frame point in the lamp assembly's local frame, where x runs
/// along the lamp axis, y spans across the three lamps, and z points from the
/// assembly toward the scene.
inline Point3 world_to_lamp_frame(const Pose& assembly_pose, const Point3& p) {
    return assembly_pose.inverse().apply(p);
}

inline Vec3 world_to_lamp_direction(const Pose& assembly_pose, const Vec3& v) {
    return assembly_pose.rotation.conjugate() * v;
}

/// Build a pose at `position` whose local z axis points along `z_axis` and
/// whose local x axis is as close to `x_hint` as orthogonality allows.
inline Pose pose_facing(const Point3& position, const Vec3& z_axis, const Vec3& x_hint) {
    const Vec3 z = z_axis.normalized();
    Vec3 x = x_hint - x_hint.dot(z) * z;
    if (x.squaredNorm() < 1e-12) {
        // hint parallel to z; pick any perpendicular direction
        x = z.unitOrthogonal();
    }
    x.normalize();
    const Vec3 y = z.cross(x);
    Eigen::Matrix3d r;
    r.col(0) = x;
    r.col(1) = y;
    r.col(2) = z;
    return Pose{position, Quat(r).normalized()};
}

}  // namespace uvdose
