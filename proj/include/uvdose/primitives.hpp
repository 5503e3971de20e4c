#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uvdose/errors.hpp"
#include "uvdose/geometry.hpp"

namespace uvdose {

enum class PrimitiveType { Box, Cylinder, Patch };

/// Scene geometry: axis-z-aligned solids (box with yaw, upright cylinder) and
/// one-sided rectangular plane patches. Local frames keep every ray test
/// axis-aligned and exact.
struct Primitive {
    PrimitiveType type = PrimitiveType::Box;
    Point3 center{0, 0, 0};
    Vec3 half_extents{0.1, 0.1, 0.1};  // box; patch uses x/y as half width/height
    double radius = 0.1;               // cylinder
    double height = 0.1;               // cylinder
    double yaw = 0.0;                  // box rotation about world z
    Vec3 normal{0, 0, 1};              // patch plane normal (the disinfected side)

    Pose pose() const {
        switch (type) {
            case PrimitiveType::Box:
                return Pose{center, Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()))};
            case PrimitiveType::Cylinder:
                return Pose{center, Quat::Identity()};
            case PrimitiveType::Patch:
                return pose_facing(center, normal, Vec3::UnitX());
        }
        return Pose{};
    }

    Eigen::AlignedBox3d bounding_box() const {
        const Pose p = pose();
        Vec3 local_half;
        switch (type) {
            case PrimitiveType::Box:
                local_half = half_extents;
                break;
            case PrimitiveType::Cylinder:
                local_half = Vec3(radius, radius, height / 2.0);
                break;
            case PrimitiveType::Patch:
                local_half = Vec3(half_extents.x(), half_extents.y(), 1e-4);
                break;
        }
        const Eigen::Matrix3d rot_abs = p.rotation.toRotationMatrix().cwiseAbs();
        const Vec3 world_half = rot_abs * local_half;
        return {center - world_half, center + world_half};
    }

    Eigen::AlignedBox2d footprint() const {
        const auto box = bounding_box();
        return {Eigen::Vector2d(box.min().x(), box.min().y()),
                Eigen::Vector2d(box.max().x(), box.max().y())};
    }
};

namespace detail {

struct Interval {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool valid = false;
};

// tangency tolerance: chords shorter than this, or rays within this of a
// face plane, do not count as interior crossings
inline constexpr double kTangentEps = 1e-12;

// parameter interval where origin + t*dir lies inside the axis-aligned box
inline Interval slab_interval(const Vec3& origin, const Vec3& dir, const Vec3& half) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        if (std::abs(dir[a]) < 1e-15) {
            if (std::abs(origin[a]) >= half[a] - kTangentEps) {
                return {};
            }
            continue;
        }
        double t0 = (-half[a] - origin[a]) / dir[a];
        double t1 = (half[a] - origin[a]) / dir[a];
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
    }
    if (hi <= lo) {
        return {};
    }
    return {lo, hi, true};
}

// interval inside an upright cylinder centered at the local origin
inline Interval cylinder_interval(const Vec3& origin, const Vec3& dir, double radius,
                                  double half_height) {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    const double a = dir.x() * dir.x() + dir.y() * dir.y();
    const double c = origin.x() * origin.x() + origin.y() * origin.y() - radius * radius;
    if (a < 1e-15) {
        if (c >= -kTangentEps) return {};
    } else {
        const double b = 2.0 * (origin.x() * dir.x() + origin.y() * dir.y());
        const double disc = b * b - 4.0 * a * c;
        if (disc <= 0.0) return {};
        const double root = std::sqrt(disc);
        lo = std::max(lo, (-b - root) / (2.0 * a));
        hi = std::min(hi, (-b + root) / (2.0 * a));
    }
    if (std::abs(dir.z()) < 1e-15) {
        if (std::abs(origin.z()) >= half_height) return {};
    } else {
        double t0 = (-half_height - origin.z()) / dir.z();
        double t1 = (half_height - origin.z()) / dir.z();
        if (t0 > t1) std::swap(t0, t1);
        lo = std::max(lo, t0);
        hi = std::min(hi, t1);
    }
    if (hi <= lo) return {};
    return {lo, hi, true};
}

}  // namespace detail

/// True iff the open segment (a, b) passes through the primitive's interior
/// (or crosses a patch transversally). Tangency does not count.
inline bool segment_intersects(const Primitive& prim, const Point3& a, const Point3& b) {
    const Pose inv = prim.pose().inverse();
    const Vec3 origin = inv.apply(a);
    const Vec3 dir = inv.apply(b) - origin;

    if (prim.type == PrimitiveType::Patch) {
        if (std::abs(dir.z()) < 1e-15) {
            return false;  // in-plane or parallel: tangent, not a crossing
        }
        const double t = -origin.z() / dir.z();
        if (t <= 0.0 || t >= 1.0) {
            return false;
        }
        const double x = origin.x() + t * dir.x();
        const double y = origin.y() + t * dir.y();
        return std::abs(x) < prim.half_extents.x() && std::abs(y) < prim.half_extents.y();
    }

    const detail::Interval span =
        prim.type == PrimitiveType::Box
            ? detail::slab_interval(origin, dir, prim.half_extents)
            : detail::cylinder_interval(origin, dir, prim.radius, prim.height / 2.0);
    if (!span.valid) {
        return false;
    }
    return std::max(span.lo, 0.0) + detail::kTangentEps < std::min(span.hi, 1.0);
}

/// First boundary hit along origin + t*dir for t in [0, t_max], if any.
inline std::optional<double> first_hit(const Primitive& prim, const Point3& origin_w,
                                       const Vec3& dir_w, double t_max) {
    const Pose inv = prim.pose().inverse();
    const Vec3 origin = inv.apply(origin_w);
    const Vec3 dir = inv.rotation * dir_w;

    if (prim.type == PrimitiveType::Patch) {
        if (std::abs(dir.z()) < 1e-15) return std::nullopt;
        const double t = -origin.z() / dir.z();
        if (t < 0.0 || t > t_max) return std::nullopt;
        const double x = origin.x() + t * dir.x();
        const double y = origin.y() + t * dir.y();
        if (std::abs(x) <= prim.half_extents.x() && std::abs(y) <= prim.half_extents.y()) {
            return t;
        }
        return std::nullopt;
    }

    const detail::Interval span =
        prim.type == PrimitiveType::Box
            ? detail::slab_interval(origin, dir, prim.half_extents)
            : detail::cylinder_interval(origin, dir, prim.radius, prim.height / 2.0);
    if (!span.valid || span.hi < 0.0) return std::nullopt;
    const double t = std::max(span.lo, 0.0);
    if (t > t_max) return std::nullopt;
    return t;
}

/// True iff the point lies inside the solid (patches contain nothing).
inline bool contains(const Primitive& prim, const Point3& p_world) {
    const Vec3 p = prim.pose().inverse().apply(p_world);
    switch (prim.type) {
        case PrimitiveType::Box:
            return (p.cwiseAbs().array() <= prim.half_extents.array()).all();
        case PrimitiveType::Cylinder:
            return std::hypot(p.x(), p.y()) <= prim.radius &&
                   std::abs(p.z()) <= prim.height / 2.0;
        case PrimitiveType::Patch:
            return false;
    }
    return false;
}

/// Unsigned distance from a point to the primitive's surface.
inline double distance_to_surface(const Primitive& prim, const Point3& p_world) {
    const Vec3 p = prim.pose().inverse().apply(p_world);
    switch (prim.type) {
        case PrimitiveType::Box: {
            const Vec3 q = p.cwiseAbs() - prim.half_extents;
            const double outside = q.cwiseMax(0.0).norm();
            const double inside = std::min(q.maxCoeff(), 0.0);
            return std::abs(outside + inside);
        }
        case PrimitiveType::Cylinder: {
            const Eigen::Vector2d d(std::hypot(p.x(), p.y()) - prim.radius,
                                    std::abs(p.z()) - prim.height / 2.0);
            const double outside = d.cwiseMax(0.0).norm();
            const double inside = std::min(std::max(d.x(), d.y()), 0.0);
            return std::abs(outside + inside);
        }
        case PrimitiveType::Patch: {
            const double dx = std::max(std::abs(p.x()) - prim.half_extents.x(), 0.0);
            const double dy = std::max(std::abs(p.y()) - prim.half_extents.y(), 0.0);
            return std::sqrt(dx * dx + dy * dy + p.z() * p.z());
        }
    }
    return 0.0;
}

/// Outward surface normal at (or near) a surface point, in world frame.
inline Vec3 outward_normal_at(const Primitive& prim, const Point3& p_world) {
    const Pose pose = prim.pose();
    const Vec3 p = pose.inverse().apply(p_world);
    Vec3 local(0, 0, 1);
    switch (prim.type) {
        case PrimitiveType::Box: {
            const Vec3 slack = prim.half_extents - p.cwiseAbs();
            int axis = 0;
            if (slack.y() < slack[axis]) axis = 1;
            if (slack.z() < slack[axis]) axis = 2;
            local = Vec3::Zero();
            local[axis] = p[axis] >= 0.0 ? 1.0 : -1.0;
            break;
        }
        case PrimitiveType::Cylinder: {
            const double lateral = std::abs(prim.radius - std::hypot(p.x(), p.y()));
            const double cap = std::abs(prim.height / 2.0 - std::abs(p.z()));
            if (lateral < cap && std::hypot(p.x(), p.y()) > 1e-12) {
                local = Vec3(p.x(), p.y(), 0).normalized();
            } else {
                local = Vec3(0, 0, p.z() >= 0.0 ? 1.0 : -1.0);
            }
            break;
        }
        case PrimitiveType::Patch:
            local = Vec3(0, 0, p.z() >= 0.0 ? 1.0 : -1.0);
            break;
    }
    return pose.rotation * local;
}

/// Surface samples with outward normals, roughly `spacing` apart. Patches are
/// sampled on their facing side only.
inline std::vector<std::pair<Point3, Vec3>> sample_surface(const Primitive& prim,
                                                           double spacing) {
    std::vector<std::pair<Point3, Vec3>> samples;
    const Pose pose = prim.pose();
    const auto emit = [&](const Vec3& local_pt, const Vec3& local_n) {
        samples.emplace_back(pose.apply(local_pt), pose.rotation * local_n);
    };
    const auto steps = [&](double full) {
        return std::max(1, static_cast<int>(std::ceil(full / spacing)));
    };

    switch (prim.type) {
        case PrimitiveType::Box: {
            const Vec3 h = prim.half_extents;
            for (int axis = 0; axis < 3; ++axis) {
                const int u = (axis + 1) % 3, v = (axis + 2) % 3;
                const int nu = steps(2.0 * h[u]), nv = steps(2.0 * h[v]);
                for (int sign = -1; sign <= 1; sign += 2) {
                    Vec3 n = Vec3::Zero();
                    n[axis] = sign;
                    for (int i = 0; i < nu; ++i) {
                        for (int j = 0; j < nv; ++j) {
                            Vec3 p;
                            p[axis] = sign * h[axis];
                            p[u] = -h[u] + (i + 0.5) * 2.0 * h[u] / nu;
                            p[v] = -h[v] + (j + 0.5) * 2.0 * h[v] / nv;
                            emit(p, n);
                        }
                    }
                }
            }
            break;
        }
        case PrimitiveType::Cylinder: {
            const double hh = prim.height / 2.0;
            const int n_theta = std::max(3, static_cast<int>(
                                                std::ceil(2.0 * std::numbers::pi * prim.radius / spacing)));
            const int n_z = steps(prim.height);
            for (int i = 0; i < n_theta; ++i) {
                const double theta = 2.0 * std::numbers::pi * (i + 0.5) / n_theta;
                const Vec3 radial(std::cos(theta), std::sin(theta), 0.0);
                for (int j = 0; j < n_z; ++j) {
                    const double z = -hh + (j + 0.5) * prim.height / n_z;
                    emit(prim.radius * radial + Vec3(0, 0, z), radial);
                }
            }
            const int n_cap = steps(2.0 * prim.radius);
            for (int sign = -1; sign <= 1; sign += 2) {
                for (int i = 0; i < n_cap; ++i) {
                    for (int j = 0; j < n_cap; ++j) {
                        const double x = -prim.radius + (i + 0.5) * 2.0 * prim.radius / n_cap;
                        const double y = -prim.radius + (j + 0.5) * 2.0 * prim.radius / n_cap;
                        if (x * x + y * y <= prim.radius * prim.radius) {
                            emit(Vec3(x, y, sign * hh), Vec3(0, 0, sign));
                        }
                    }
                }
            }
            break;
        }
        case PrimitiveType::Patch: {
            const int nu = steps(2.0 * prim.half_extents.x());
            const int nv = steps(2.0 * prim.half_extents.y());
            for (int i = 0; i < nu; ++i) {
                for (int j = 0; j < nv; ++j) {
                    const double x = -prim.half_extents.x() +
                                     (i + 0.5) * 2.0 * prim.half_extents.x() / nu;
                    const double y = -prim.half_extents.y() +
                                     (j + 0.5) * 2.0 * prim.half_extents.y() / nv;
                    emit(Vec3(x, y, 0), Vec3(0, 0, 1));
                }
            }
            break;
        }
    }
    return samples;
}

}  // namespace uvdose
