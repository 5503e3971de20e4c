#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "uvdose/geometry.hpp"

using namespace uvdose;

namespace {

Pose random_pose(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Vec3 axis = Vec3(u(rng), u(rng), u(rng)).normalized();
    const double angle = u(rng) * 3.0;
    Pose p;
    p.translation = Point3(u(rng), u(rng), u(rng)) * 2.0;
    p.rotation = Quat(Eigen::AngleAxisd(angle, axis));
    return p;
}

}  // namespace

TEST_CASE("transform_point basic cases", "[geometry]") {
    SECTION("identity") {
        const Point3 p(1, 2, 3);
        REQUIRE(transform_point(Pose::identity(), p).isApprox(p, 0.0));
    }
    SECTION("pure translation") {
        Pose pose;
        pose.translation = Point3(0, 0, 0.3);
        const Point3 out = transform_point(pose, Point3(0, 0, 0));
        REQUIRE(out.x() == 0.0);
        REQUIRE(out.y() == 0.0);
        REQUIRE(out.z() == Catch::Approx(0.3));
    }
    SECTION("90 degree rotation about z") {
        Pose pose;
        pose.rotation = Quat(Eigen::AngleAxisd(M_PI / 2.0, Vec3::UnitZ()));
        const Point3 out = transform_point(pose, Point3(1, 0, 0));
        REQUIRE(out.x() == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(out.y() == Catch::Approx(1.0).margin(1e-12));
        REQUIRE(out.z() == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("world_to_lamp_frame basic cases", "[geometry]") {
    SECTION("identity assembly") {
        const Point3 p(0.1, 0, 0.3);
        REQUIRE(world_to_lamp_frame(Pose::identity(), p).isApprox(p, 1e-15));
    }
    SECTION("translated assembly") {
        Pose pose;
        pose.translation = Point3(1, 0, 0);
        const Point3 out = world_to_lamp_frame(pose, Point3(1, 0, 0.3));
        REQUIRE(out.isApprox(Point3(0, 0, 0.3), 1e-12));
    }
    SECTION("round trip lamp -> world -> lamp") {
        std::mt19937 rng(7);
        for (int i = 0; i < 20; ++i) {
            const Pose pose = random_pose(rng);
            const Point3 p_lamp(0.05, -0.02, 0.31);
            const Point3 world = transform_point(pose, p_lamp);
            const Point3 back = world_to_lamp_frame(pose, world);
            REQUIRE((back - p_lamp).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("transform composition and inverse", "[geometry]") {
    std::mt19937 rng(11);
    for (int i = 0; i < 50; ++i) {
        const Pose a = random_pose(rng);
        const Pose b = random_pose(rng);
        const Pose c = random_pose(rng);
        const Point3 p(0.3, -0.7, 1.1);

        const Point3 assoc1 = a.compose(b.compose(c)).apply(p);
        const Point3 assoc2 = a.compose(b).compose(c).apply(p);
        REQUIRE((assoc1 - assoc2).cwiseAbs().maxCoeff() < 1e-10);

        const Point3 round = a.inverse().apply(a.apply(p));
        REQUIRE((round - p).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("transform_point preserves pairwise distances", "[geometry]") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const Pose pose = random_pose(rng);
        const Point3 p(u(rng), u(rng), u(rng));
        const Point3 q(u(rng), u(rng), u(rng));
        const double before = (p - q).norm();
        const double after = (pose.apply(p) - pose.apply(q)).norm();
        if (before > 1e-12) {
            REQUIRE(std::abs(after - before) / before < 1e-10);
        }
    }
}

TEST_CASE("pose_facing builds a right-handed frame with requested z", "[geometry]") {
    const Vec3 z(0, 1, 0);
    const Pose pose = pose_facing(Point3(1, 2, 3), z, Vec3(1, 0, 0));
    REQUIRE((pose.rotate(Vec3::UnitZ()) - z).norm() < 1e-12);
    REQUIRE((pose.rotate(Vec3::UnitX()) - Vec3(1, 0, 0)).norm() < 1e-12);
    REQUIRE(std::abs(pose.rotation.norm() - 1.0) < 1e-9);

    // hint parallel to z still yields an orthonormal frame
    const Pose degenerate = pose_facing(Point3::Zero(), Vec3::UnitX(), Vec3::UnitX());
    REQUIRE((degenerate.rotate(Vec3::UnitZ()) - Vec3::UnitX()).norm() < 1e-12);
}
