#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uvdose/errors.hpp"
#include "uvdose/geometry.hpp"
#include "uvdose/optimizer.hpp"
#include "uvdose/planner.hpp"
#include "uvdose/primitives.hpp"

namespace uvdose {

using json = nlohmann::json;

struct SceneObject {
    std::string id;
    std::string label;
    Primitive shape;
};

struct Probe {
    std::string id;
    std::string object_id;
    Point3 position{0, 0, 0};
};

struct Station {
    Eigen::Vector2d position{0, 0};
    double duration_s = 60.0;
};

struct MetricThresholds {
    double hotspot = 25.0;  // mJ/cm^2, coverage threshold for hotspot probes
    double overall = 5.0;   // mJ/cm^2, coverage threshold for all probes
};

struct MappingConfig {
    double octree_resolution = 0.02;
    int normal_k = 12;
    int outlier_k = 8;
    double outlier_alpha = 1.0;
    double standoff = 0.3;
    double row_spacing = 0.0;    // 0: use the lamp length
    double waypoint_step = 0.05;
};

struct ArmConfig {
    double reach = 1.5;       // half extent of the reachable box around the stop point
    double z_min = 0.02;
    double z_max = 2.0;
    double v_max = 0.25;
    double dwell_floor = 0.1;
};

struct AssemblyConfig {
    double flux_w = kDefaultLampFlux;
    double length_m = kDefaultLampLength;
    double spacing_m = kDefaultLampSpacing;

    LampAssembly make(const Pose& pose = Pose::identity()) const {
        return LampAssembly::make(flux_w, length_m, spacing_m, pose);
    }
};

struct TowerConfig {
    double flux_w = 10.0;
    double length_m = 0.9;
    double spacing_m = 0.06;
    double center_height = 1.0;
};

struct PlannerConfig {
    double stop_distance = 0.6;
    double grid_resolution = 0.05;
    double inflation = 0.12;
    std::size_t lp_row_cap = 2000;
    double chassis_speed = 0.3;
};

/// Declarative simulation input: room, labeled objects, dosimeter probes,
/// lamp configuration, dose standards, and evaluation thresholds.
struct Scene {
    std::string name = "scene";
    std::uint64_t seed = 0;
    Vec3 room_extent{5.0, 4.0, 2.6};
    Eigen::Vector2d chassis_start{0.5, 0.5};
    MappingConfig mapping;
    ArmConfig arm;
    AssemblyConfig assembly;
    TowerConfig tower;
    PlannerConfig planner;
    DoseTargets targets;
    MetricThresholds thresholds;
    double probe_saturation = 100.0;  // mJ/cm^2, dosimeter card ceiling
    std::vector<Primitive> obstacles;
    std::vector<SceneObject> objects;
    std::vector<Probe> probes;
    std::vector<Station> stations;
    json risk_overrides = json::object();

    const SceneObject* find_object(const std::string& id) const {
        for (const auto& obj : objects) {
            if (obj.id == id) return &obj;
        }
        return nullptr;
    }

    RiskRegistry registry() const { return RiskRegistry::from_json(risk_overrides); }
};

enum class Policy { Differentiated, UniformHigh, FixedStation };

inline std::string policy_name(Policy p) {
    switch (p) {
        case Policy::Differentiated: return "differentiated";
        case Policy::UniformHigh: return "uniform";
        case Policy::FixedStation: return "station";
    }
    return "";
}

inline Policy parse_policy(const std::string& name) {
    if (name == "diff" || name == "differentiated") return Policy::Differentiated;
    if (name == "uniform" || name == "uniform-high") return Policy::UniformHigh;
    if (name == "station" || name == "fixed-station") return Policy::FixedStation;
    throw ValidationError("unknown policy: " + name);
}

// ---------------------------------------------------------------------------
// JSON parsing

namespace detail {

inline Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) {
        throw ValidationError("expected a 3-element array");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline Eigen::Vector2d vec2_from(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw ValidationError("expected a 2-element array");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Primitive primitive_from(const json& j) {
    Primitive prim;
    const std::string type = j.value("type", "box");
    if (type == "box") {
        prim.type = PrimitiveType::Box;
        prim.center = vec3_from(j.at("center"));
        prim.half_extents = vec3_from(j.at("size")) / 2.0;
        prim.yaw = j.value("yaw", 0.0);
    } else if (type == "cylinder") {
        prim.type = PrimitiveType::Cylinder;
        prim.center = vec3_from(j.at("center"));
        prim.radius = j.at("radius").get<double>();
        prim.height = j.at("height").get<double>();
    } else if (type == "patch") {
        prim.type = PrimitiveType::Patch;
        prim.center = vec3_from(j.at("center"));
        prim.normal = vec3_from(j.at("normal")).normalized();
        prim.half_extents = Vec3(j.at("width").get<double>() / 2.0,
                                 j.at("height").get<double>() / 2.0, 0.0);
    } else {
        throw ValidationError("unknown primitive type: " + type);
    }
    return prim;
}

}  // namespace detail

inline Scene parse_scene(const json& j) {
    Scene scene;
    scene.name = j.value("name", "scene");
    scene.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("room")) {
        scene.room_extent = detail::vec3_from(j.at("room").at("extent"));
    }
    if (j.contains("chassis_start")) {
        scene.chassis_start = detail::vec2_from(j.at("chassis_start"));
    }
    if (j.contains("mapping")) {
        const auto& m = j.at("mapping");
        scene.mapping.octree_resolution = m.value("octree_resolution", scene.mapping.octree_resolution);
        scene.mapping.normal_k = m.value("normal_k", scene.mapping.normal_k);
        scene.mapping.outlier_k = m.value("outlier_k", scene.mapping.outlier_k);
        scene.mapping.outlier_alpha = m.value("outlier_alpha", scene.mapping.outlier_alpha);
        scene.mapping.standoff = m.value("standoff", scene.mapping.standoff);
        scene.mapping.row_spacing = m.value("row_spacing", scene.mapping.row_spacing);
        scene.mapping.waypoint_step = m.value("waypoint_step", scene.mapping.waypoint_step);
    }
    if (j.contains("arm")) {
        const auto& a = j.at("arm");
        scene.arm.reach = a.value("reach", scene.arm.reach);
        scene.arm.z_min = a.value("z_min", scene.arm.z_min);
        scene.arm.z_max = a.value("z_max", scene.arm.z_max);
        scene.arm.v_max = a.value("v_max", scene.arm.v_max);
        scene.arm.dwell_floor = a.value("dwell_floor", scene.arm.dwell_floor);
    }
    if (j.contains("assembly")) {
        const auto& a = j.at("assembly");
        scene.assembly.flux_w = a.value("flux_w", scene.assembly.flux_w);
        scene.assembly.length_m = a.value("length_m", scene.assembly.length_m);
        scene.assembly.spacing_m = a.value("spacing_m", scene.assembly.spacing_m);
    }
    if (j.contains("tower")) {
        const auto& t = j.at("tower");
        scene.tower.flux_w = t.value("flux_w", scene.tower.flux_w);
        scene.tower.length_m = t.value("length_m", scene.tower.length_m);
        scene.tower.spacing_m = t.value("spacing_m", scene.tower.spacing_m);
        scene.tower.center_height = t.value("center_height", scene.tower.center_height);
    }
    if (j.contains("planner")) {
        const auto& p = j.at("planner");
        scene.planner.stop_distance = p.value("stop_distance", scene.planner.stop_distance);
        scene.planner.grid_resolution = p.value("grid_resolution", scene.planner.grid_resolution);
        scene.planner.inflation = p.value("inflation", scene.planner.inflation);
        scene.planner.lp_row_cap = p.value("lp_row_cap", scene.planner.lp_row_cap);
        scene.planner.chassis_speed = p.value("chassis_speed", scene.planner.chassis_speed);
    }
    if (j.contains("targets")) {
        const auto& t = j.at("targets");
        scene.targets.hotspot_min = t.value("hotspot_min", scene.targets.hotspot_min);
        scene.targets.nonhotspot_min = t.value("nonhotspot_min", scene.targets.nonhotspot_min);
    }
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        scene.thresholds.hotspot = t.value("hotspot", scene.thresholds.hotspot);
        scene.thresholds.overall = t.value("overall", scene.thresholds.overall);
    }
    scene.probe_saturation = j.value("probe_saturation", scene.probe_saturation);
    for (const auto& o : j.value("obstacles", json::array())) {
        scene.obstacles.push_back(detail::primitive_from(o));
    }
    for (const auto& o : j.value("objects", json::array())) {
        SceneObject obj;
        obj.id = o.at("id").get<std::string>();
        obj.label = o.at("label").get<std::string>();
        obj.shape = detail::primitive_from(o.at("shape"));
        scene.objects.push_back(std::move(obj));
    }
    for (const auto& p : j.value("probes", json::array())) {
        Probe probe;
        probe.id = p.at("id").get<std::string>();
        probe.object_id = p.at("object").get<std::string>();
        probe.position = detail::vec3_from(p.at("position"));
        scene.probes.push_back(std::move(probe));
    }
    for (const auto& s : j.value("stations", json::array())) {
        Station station;
        station.position = detail::vec2_from(s.at("position"));
        station.duration_s = s.value("duration_s", station.duration_s);
        scene.stations.push_back(station);
    }
    if (j.contains("risk_overrides")) {
        scene.risk_overrides = j.at("risk_overrides");
    }
    return scene;
}

inline Scene load_scene(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw Error("cannot open scene file: " + path);
    }
    json j;
    is >> j;
    return parse_scene(j);
}

/// Scene invariants: objects inside the room, every probe on its object's
/// surface within 1 cm.
inline void validate_scene(const Scene& scene) {
    if (scene.objects.empty()) {
        throw ValidationError("scene has no objects");
    }
    const Eigen::AlignedBox3d room(Point3(0, 0, 0), scene.room_extent);
    for (const auto& obj : scene.objects) {
        const auto bbox = obj.shape.bounding_box();
        if (!room.contains(bbox.min()) || !room.contains(bbox.max())) {
            throw ValidationError("object '" + obj.id + "' extends outside the room");
        }
    }
    for (const auto& probe : scene.probes) {
        const SceneObject* obj = scene.find_object(probe.object_id);
        if (obj == nullptr) {
            throw ValidationError("probe '" + probe.id + "' references unknown object '" +
                                  probe.object_id + "'");
        }
        if (distance_to_surface(obj->shape, probe.position) > 0.01) {
            throw ValidationError("probe '" + probe.id + "' is not on the surface of '" +
                                  probe.object_id + "'");
        }
    }
}

/// True iff the open segment (a, b) is blocked by any obstacle or object.
inline bool ray_occluded(const Scene& scene, const Point3& a, const Point3& b) {
    if ((a - b).squaredNorm() <= 0.0) {
        throw Error("ray_occluded endpoints coincide");
    }
    for (const auto& obstacle : scene.obstacles) {
        if (segment_intersects(obstacle, a, b)) return true;
    }
    for (const auto& obj : scene.objects) {
        if (segment_intersects(obj.shape, a, b)) return true;
    }
    return false;
}

}  // namespace uvdose
