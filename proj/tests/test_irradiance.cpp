#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "uvdose/irradiance.hpp"

using namespace uvdose;

namespace {

struct RandomConfig {
    Lamp lamp;
    Point3 p;
    Vec3 n;
};

RandomConfig random_config(std::mt19937& rng, double z_min) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    RandomConfig c;
    c.lamp.length = 0.05 + 0.45 * u01(rng);
    c.lamp.radiant_flux = 0.5 + 4.5 * u01(rng);
    c.lamp.y_offset = 0.1 * sym(rng);
    c.p = Point3(0.5 * sym(rng), 0.5 * sym(rng), z_min + (1.0 - z_min) * u01(rng));
    c.n = Vec3(sym(rng), sym(rng), sym(rng));
    while (c.n.squaredNorm() < 1e-6) {
        c.n = Vec3(sym(rng), sym(rng), sym(rng));
    }
    c.n.normalize();
    return c;
}

}  // namespace

TEST_CASE("closed form matches the analytic hand value", "[irradiance]") {
    // flux 1 W, length 0.2 m, point 0.3 m in front of the lamp center,
    // normal facing the lamp
    const Lamp lamp{0.2, 1.0, 0.0};
    const Point3 p(0.0, 0.0, 0.3);
    const Vec3 n(0.0, 0.0, -1.0);
    const double expected =
        1.0 / (4.0 * std::numbers::pi * 0.2 * 0.3) * 2.0 * std::atan(1.0 / 3.0);

    const double closed = irradiance_closed_form(lamp, p, n).w_m2;
    REQUIRE(std::abs(closed - expected) / expected < 1e-12);

    const double quad = irradiance_quadrature(lamp, p, n, 100000).w_m2;
    REQUIRE(std::abs(quad - expected) / expected < 1e-9);
    REQUIRE(std::abs(quad - closed) / closed < 1e-9);
}

TEST_CASE("closed form clamps grazing and back-face incidence to zero", "[irradiance]") {
    const Lamp lamp{0.2, 1.0, 0.0};
    const Point3 p(0.05, 0.0, 0.3);
    const Vec3 to_center = (Point3(0, 0, 0) - p).normalized();

    Vec3 grazing = to_center.unitOrthogonal();
    REQUIRE(irradiance_closed_form(lamp, p, grazing).w_m2 == 0.0);

    Vec3 behind = -to_center;
    REQUIRE(irradiance_closed_form(lamp, p, behind).w_m2 == 0.0);
    REQUIRE(irradiance_quadrature(lamp, p, grazing, 64).w_m2 == 0.0);
}

TEST_CASE("point on the lamp axis raises DegenerateGeometry", "[irradiance]") {
    const Lamp lamp{0.2, 1.0, 0.01};
    REQUIRE_THROWS_AS(irradiance_closed_form(lamp, Point3(0.3, 0.01, 0.0), Vec3(0, 0, 1)),
                      DegenerateGeometry);
    REQUIRE_THROWS_AS(irradiance_quadrature(lamp, Point3(0.3, 0.01, 0.0), Vec3(0, 0, 1), 10),
                      DegenerateGeometry);
}

TEST_CASE("quadrature converges monotonically to the closed form", "[irradiance]") {
    const Lamp lamp{0.3, 2.0, 0.05};
    const Point3 p(0.07, -0.04, 0.25);
    const Vec3 n = (Point3(0, lamp.y_offset, 0) - p).normalized();
    const double closed = irradiance_closed_form(lamp, p, n).w_m2;

    double prev_err = std::numeric_limits<double>::infinity();
    for (std::size_t segs : {std::size_t{1000}, std::size_t{10000}, std::size_t{100000}}) {
        const double quad = irradiance_quadrature(lamp, p, n, segs).w_m2;
        const double err = std::abs(quad - closed) / closed;
        REQUIRE(err < prev_err);
        prev_err = err;
    }
    REQUIRE(prev_err <= 1e-6);
}

TEST_CASE("quadrature half sums are symmetric at x = 0", "[irradiance]") {
    // independent midpoint sums over each lamp half
    const Lamp lamp{0.24, 1.5, 0.0};
    const Point3 p(0.0, 0.08, 0.3);
    const Vec3 n = (Point3(0, 0, 0) - p).normalized();
    const std::size_t n_segments = 2000;

    const double dl = lamp.length / static_cast<double>(n_segments);
    const double u_sq = p.y() * p.y() + p.z() * p.z();
    double left = 0.0, right = 0.0;
    for (std::size_t i = 0; i < n_segments; ++i) {
        const double l = -0.5 * lamp.length + (static_cast<double>(i) + 0.5) * dl;
        const double term = dl / ((p.x() - l) * (p.x() - l) + u_sq);
        (i < n_segments / 2 ? left : right) += term;
    }
    REQUIRE(std::abs(left - right) < 1e-12);

    const double coeff = lamp.radiant_flux / (4.0 * std::numbers::pi * lamp.length);
    const double cosine = (Point3(0, 0, 0) - p).normalized().dot(n);
    const double expected = coeff * (left + right) * cosine;
    const double quad = irradiance_quadrature(lamp, p, n, n_segments).w_m2;
    REQUIRE(std::abs(quad - expected) / expected < 1e-12);
}

TEST_CASE("assembly reduces to three times one lamp when spacing -> 0", "[irradiance]") {
    const double flux = 1.3, length = 0.135;
    LampAssembly tight = LampAssembly::make(flux, length, 1e-15);
    SurfacePoint sp;
    sp.position = Point3(0.02, 0.01, 0.3);
    sp.normal = (Point3(0, 0, 0) - sp.position).normalized();

    const double total = irradiance_assembly(tight, sp).w_m2;
    const double single =
        irradiance_closed_form(Lamp{length, flux, 0.0}, sp.position, sp.normal).w_m2;
    REQUIRE(std::abs(total - 3.0 * single) / (3.0 * single) < 1e-12);
}

TEST_CASE("upper and lower lamps contribute equally on the y = 0 plane", "[irradiance]") {
    LampAssembly assembly = LampAssembly::make(1.0, 0.135, 0.05);
    const Point3 p(0.0, 0.0, 0.3);
    const Vec3 n(0.0, 0.0, -1.0);
    const double upper = irradiance_closed_form(assembly.lamps[0], p, n).w_m2;
    const double lower = irradiance_closed_form(assembly.lamps[2], p, n).w_m2;
    REQUIRE(std::abs(upper - lower) < 1e-12);
}

TEST_CASE("assembly at a random pose matches per-lamp quadrature", "[irradiance]") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        LampAssembly assembly = LampAssembly::make(2.0, 0.135, 0.05);
        assembly.pose.translation = Point3(sym(rng), sym(rng), sym(rng));
        assembly.pose.rotation =
            Quat(Eigen::AngleAxisd(sym(rng) * 2.0, Vec3(sym(rng), sym(rng), 1.0).normalized()));

        SurfacePoint sp;
        const Point3 p_lamp(0.1 * sym(rng), 0.1 * sym(rng), 0.25 + 0.2 * sym(rng) * 0.5);
        sp.position = assembly.pose.apply(p_lamp);
        sp.normal = assembly.pose.rotate(Vec3(0.2 * sym(rng), 0.2 * sym(rng), -1.0).normalized());

        const double total = irradiance_assembly(assembly, sp).w_m2;
        double oracle = 0.0;
        for (const Lamp& lamp : assembly.lamps) {
            oracle += irradiance_quadrature(lamp, p_lamp, assembly.pose.inverse().rotation * sp.normal,
                                            100000)
                          .w_m2;
        }
        if (oracle > 0.0) {
            REQUIRE(std::abs(total - oracle) / oracle < 1e-6);
        } else {
            REQUIRE(total == 0.0);
        }
    }
}

TEST_CASE("closed form vs quadrature over randomized configurations", "[irradiance]") {
    std::mt19937 rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const RandomConfig c = random_config(rng, 0.05);
        const double closed = irradiance_closed_form(c.lamp, c.p, c.n).w_m2;
        const double quad = irradiance_quadrature(c.lamp, c.p, c.n, 100000).w_m2;
        REQUIRE(closed >= 0.0);
        if (closed > 0.0) {
            REQUIRE(std::abs(quad - closed) / closed <= 1e-6);
        } else {
            REQUIRE(quad == 0.0);
        }
    }
}

TEST_CASE("assembly follows the inverse square law in the far field", "[irradiance]") {
    LampAssembly assembly = LampAssembly::make(1.0, 0.135, 0.05);
    const double L = assembly.lamps[1].length;
    double reference = 0.0;
    for (double factor : {20.0, 40.0, 80.0}) {
        const double z = factor * L;
        SurfacePoint sp;
        sp.position = Point3(0.0, 0.0, z);
        sp.normal = Vec3(0.0, 0.0, -1.0);
        const double scaled = irradiance_assembly(assembly, sp).w_m2 * z * z;
        if (reference == 0.0) {
            reference = scaled;
        } else {
            REQUIRE(std::abs(scaled - reference) / reference < 0.01);
        }
    }
}

TEST_CASE("per-segment cosine mode differs but stays close off axis", "[irradiance]") {
    const Lamp lamp{0.3, 1.0, 0.0};
    const Point3 p(0.12, 0.0, 0.3);
    const Vec3 n = (Point3(0, 0, 0) - p).normalized();
    const double center = irradiance_quadrature(lamp, p, n, 20000).w_m2;
    const double exact =
        irradiance_quadrature(lamp, p, n, 20000, QuadratureCosine::PerSegment).w_m2;
    REQUIRE(center != exact);
    REQUIRE(std::abs(center - exact) / center < 0.2);
}

TEST_CASE("accumulate_dose unit arithmetic", "[irradiance]") {
    REQUIRE(accumulate_dose(Irradiance{10.0}, 22.0) == Catch::Approx(22.0));
    REQUIRE(accumulate_dose(Irradiance{10.0}, 0.0) == 0.0);
    REQUIRE(accumulate_dose(Irradiance{2.5}, 8.0) == Catch::Approx(2.0));
    REQUIRE_THROWS_AS(accumulate_dose(Irradiance{1.0}, -0.5), NegativeDuration);
}

TEST_CASE("dose accumulation is additive in time", "[irradiance]") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int i = 0; i < 100; ++i) {
        const Irradiance e{u(rng)};
        const double t1 = u(rng), t2 = u(rng);
        const double both = accumulate_dose(e, t1 + t2);
        const double split = accumulate_dose(e, t1) + accumulate_dose(e, t2);
        REQUIRE(std::abs(both - split) <= 1e-12 * std::max(1.0, both));
    }
}

TEST_CASE("irradiance unit conversions", "[irradiance]") {
    const Irradiance e{1.0};  // 1 W/m^2
    REQUIRE(e.to_uW_cm2() == Catch::Approx(100.0));
    REQUIRE(e.to_mW_cm2() == Catch::Approx(0.1));
}
