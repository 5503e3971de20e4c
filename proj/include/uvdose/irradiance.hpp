#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "uvdose/errors.hpp"
#include "uvdose/geometry.hpp"

namespace uvdose {

/// One linear UV-C lamp, modeled as a uniform line source along the local
/// x axis at height y_offset on the assembly's y axis.
struct Lamp {
    double length = 0.135;       // m
    double radiant_flux = 1.0;   // W of UV-C radiant output (not electrical power)
    double y_offset = 0.0;       // m, mount position along the assembly y axis
};

inline constexpr double kDefaultLampFlux = 1.0;     // W, placeholder until configured
inline constexpr double kDefaultLampLength = 0.135; // m
inline constexpr double kDefaultLampSpacing = 0.05; // m

/// Three parallel lamps mounted at y = +spacing, 0, -spacing in the assembly
/// frame (upper, middle, lower), plus the assembly's world pose.
struct LampAssembly {
    std::array<Lamp, 3> lamps;
    double spacing = kDefaultLampSpacing;
    Pose pose;

    static LampAssembly make(double flux_per_lamp, double lamp_length, double lamp_spacing,
                             const Pose& pose = Pose::identity()) {
        LampAssembly a;
        a.spacing = lamp_spacing;
        a.pose = pose;
        a.lamps = {Lamp{lamp_length, flux_per_lamp, +lamp_spacing},
                   Lamp{lamp_length, flux_per_lamp, 0.0},
                   Lamp{lamp_length, flux_per_lamp, -lamp_spacing}};
        return a;
    }
};

/// Irradiance carried internally in W/m^2. Interfaces report uW/cm^2 or
/// mW/cm^2; dose accumulation yields mJ/cm^2.
struct Irradiance {
    double w_m2 = 0.0;

    double to_uW_cm2() const { return w_m2 * 100.0; }
    double to_mW_cm2() const { return w_m2 * 0.1; }
};

namespace detail {

// Directional factor shared by the closed form and the quadrature rule:
// cosine between the surface normal and the unit vector from the surface
// point toward the lamp center (0, y_offset, 0), clamped to [0, 1].
inline double center_cosine(const Lamp& lamp, const Point3& p, const Vec3& n) {
    const Vec3 to_center = Point3(0.0, lamp.y_offset, 0.0) - p;
    const double len = to_center.norm();
    if (len <= 0.0) {
        throw DegenerateGeometry("surface point coincides with lamp center");
    }
    return std::clamp(to_center.dot(n) / len, 0.0, 1.0);
}

inline double off_axis_sq(const Lamp& lamp, const Point3& p) {
    const double dy = p.y() - lamp.y_offset;
    return dy * dy + p.z() * p.z();
}

}  // namespace detail

/// Closed-form irradiance of one line source on a surface point given in the
/// lamp frame:
///   E = Phi / (4 pi L u) * (atan((L/2 - x)/u) + atan((L/2 + x)/u)) * max(r.n, 0)
/// with u = sqrt((y - y')^2 + z^2) and r the unit vector from the point toward
/// the lamp center. Points on the lamp axis (u = 0) are rejected: they cannot
/// occur at the working standoff, so hitting one means a frame bug upstream.
inline Irradiance irradiance_closed_form(const Lamp& lamp, const Point3& p_lamp,
                                         const Vec3& n_lamp) {
    const double u_sq = detail::off_axis_sq(lamp, p_lamp);
    if (u_sq <= 0.0) {
        throw DegenerateGeometry("surface point lies on the lamp axis");
    }
    const double cosine = detail::center_cosine(lamp, p_lamp, n_lamp);
    if (cosine == 0.0) {
        return Irradiance{0.0};
    }
    const double u = std::sqrt(u_sq);
    const double half = 0.5 * lamp.length;
    const double x = p_lamp.x();
    const double view = std::atan((half - x) / u) + std::atan((half + x) / u);
    const double e = lamp.radiant_flux / (4.0 * std::numbers::pi * lamp.length * u) * view;
    return Irradiance{e * cosine};
}

enum class QuadratureCosine {
    Center,      // same convention as the closed form; the two agree in the limit
    PerSegment,  // per-segment incidence for sensitivity studies only
};

/// Midpoint-rule reference for the closed form: the lamp is split into
/// n_segments point sources of flux Phi/L * dl each. With the Center cosine
/// convention this converges to irradiance_closed_form and serves as its
/// independent oracle.
inline Irradiance irradiance_quadrature(const Lamp& lamp, const Point3& p_lamp,
                                        const Vec3& n_lamp, std::size_t n_segments,
                                        QuadratureCosine mode = QuadratureCosine::Center) {
    if (n_segments < 1) {
        throw Error("n_segments must be >= 1");
    }
    const double u_sq = detail::off_axis_sq(lamp, p_lamp);
    if (u_sq <= 0.0) {
        throw DegenerateGeometry("surface point lies on the lamp axis");
    }
    const double dl = lamp.length / static_cast<double>(n_segments);
    const double coeff = lamp.radiant_flux / (4.0 * std::numbers::pi * lamp.length);
    const double x = p_lamp.x();
    const double dy = p_lamp.y() - lamp.y_offset;
    const double z = p_lamp.z();

    double sum = 0.0;
    if (mode == QuadratureCosine::Center) {
        const double cosine = detail::center_cosine(lamp, p_lamp, n_lamp);
        if (cosine == 0.0) {
            return Irradiance{0.0};
        }
        for (std::size_t i = 0; i < n_segments; ++i) {
            const double l = -0.5 * lamp.length + (static_cast<double>(i) + 0.5) * dl;
            const double dx = x - l;
            sum += dl / (dx * dx + u_sq);
        }
        return Irradiance{coeff * sum * cosine};
    }
    for (std::size_t i = 0; i < n_segments; ++i) {
        const double l = -0.5 * lamp.length + (static_cast<double>(i) + 0.5) * dl;
        const double dx = x - l;
        const double r_sq = dx * dx + u_sq;
        const Vec3 to_segment = Point3(l, lamp.y_offset, 0.0) - p_lamp;
        const double cosine = std::clamp(to_segment.dot(n_lamp) / std::sqrt(r_sq), 0.0, 1.0);
        sum += dl * cosine / r_sq;
    }
    return Irradiance{coeff * sum};
}

/// Total irradiance of the three-lamp assembly on a world-frame surface point:
/// transform into the lamp frame and sum the closed form over the lamps.
inline Irradiance irradiance_assembly(const LampAssembly& assembly, const SurfacePoint& sp) {
    const Pose inv = assembly.pose.inverse();
    const Point3 p_lamp = inv.apply(sp.position);
    const Vec3 n_lamp = inv.rotation * sp.normal;
    double total = 0.0;
    for (const Lamp& lamp : assembly.lamps) {
        total += irradiance_closed_form(lamp, p_lamp, n_lamp).w_m2;
    }
    return Irradiance{total};
}

/// Dose increment in mJ/cm^2 for irradiance E held for dt seconds.
/// 1 W/m^2 * 1 s = 0.1 mJ/cm^2.
inline double accumulate_dose(const Irradiance& e, double dt) {
    if (dt < 0.0) {
        throw NegativeDuration("negative exposure duration");
    }
    return e.w_m2 * dt * 0.1;
}

}  // namespace uvdose
