#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uvdose/astar.hpp"
#include "uvdose/errors.hpp"
#include "uvdose/grid_map.hpp"
#include "uvdose/irradiance.hpp"
#include "uvdose/kdtree.hpp"
#include "uvdose/octree.hpp"
#include "uvdose/optimizer.hpp"
#include "uvdose/planner.hpp"
#include "uvdose/scan_path.hpp"
#include "uvdose/scene.hpp"
#include "uvdose/surface.hpp"

namespace uvdose {

// ---------------------------------------------------------------------------
// Map synthesis

/// Chassis occupancy grid rasterized from the room, obstacles, and object
/// footprints, inflated by the configured chassis clearance.
inline GridMap build_grid_map(const Scene& scene) {
    const double res = scene.planner.grid_resolution;
    const int width = static_cast<int>(std::ceil(scene.room_extent.x() / res));
    const int height = static_cast<int>(std::ceil(scene.room_extent.y() / res));
    GridMap grid = GridMap::make(width, height, res);

    std::vector<Eigen::AlignedBox2d> footprints;
    for (const auto& obstacle : scene.obstacles) footprints.push_back(obstacle.footprint());
    for (const auto& obj : scene.objects) footprints.push_back(obj.shape.footprint());

    std::vector<bool> raw(static_cast<std::size_t>(width) * height, false);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const Eigen::Vector2d c = grid.cell_center({x, y});
            for (const auto& fp : footprints) {
                if (fp.contains(c)) {
                    raw[static_cast<std::size_t>(y) * width + x] = true;
                    break;
                }
            }
        }
    }
    const int inflate_cells = static_cast<int>(std::ceil(scene.planner.inflation / res));
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            bool occupied = false;
            for (int dy = -inflate_cells; dy <= inflate_cells && !occupied; ++dy) {
                for (int dx = -inflate_cells; dx <= inflate_cells && !occupied; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (nx < 0 || nx >= width || ny < 0 || ny >= height) continue;
                    if (!raw[static_cast<std::size_t>(ny) * width + nx]) continue;
                    if (std::hypot(dx * res, dy * res) <= scene.planner.inflation + 1e-9) {
                        occupied = true;
                    }
                }
            }
            if (occupied) grid.set(x, y, Cell::Occupied);
        }
    }
    return grid;
}

/// Virtual depth scans of every object surface: targets are sampled on each
/// primitive, visibility is resolved by exact ray casting against the whole
/// scene, and each visible ray's final stretch is integrated into the octree.
inline OccupancyOctree synthesize_scan(const Scene& scene) {
    const double res = scene.mapping.octree_resolution;
    OccupancyOctree tree(Point3(0, 0, 0), scene.room_extent, OctreeParams{res});

    std::vector<const Primitive*> solids;
    for (const auto& obstacle : scene.obstacles) solids.push_back(&obstacle);
    for (const auto& obj : scene.objects) solids.push_back(&obj.shape);

    const double sensor_standoff = 0.45;
    const Eigen::AlignedBox3d interior(Point3(1e-6, 1e-6, 1e-6),
                                       scene.room_extent - Vec3(1e-6, 1e-6, 1e-6));
    for (const auto& obj : scene.objects) {
        for (const auto& [target, normal] : sample_surface(obj.shape, res * 0.6)) {
            const Point3 origin = target + sensor_standoff * normal;
            if (!interior.contains(origin)) {
                continue;  // sensor cannot stand outside the room
            }
            bool buried = false;
            for (const Primitive* solid : solids) {
                if (contains(*solid, origin)) {
                    buried = true;
                    break;
                }
            }
            if (buried) continue;

            const Vec3 dir = (target - origin).normalized();
            double t_first = std::numeric_limits<double>::infinity();
            for (const Primitive* solid : solids) {
                if (const auto t = first_hit(*solid, origin, dir, sensor_standoff + res)) {
                    t_first = std::min(t_first, *t);
                }
            }
            if (!std::isfinite(t_first)) continue;
            const Point3 hit = origin + t_first * dir;
            // clear only a short stretch in front of the hit; full-length
            // clearing would allocate leaves for the whole room
            const Point3 near_origin = hit - dir * std::min(3.0 * res, t_first);
            tree.integrate_scan(near_origin, {hit});
        }
    }
    return tree;
}

// ---------------------------------------------------------------------------
// Mission preparation (policy independent)

struct SitePlan {
    HotspotSite site;
    std::string object_id;
    SurfaceCloud cloud;  // outward normals, doses left at zero
    ScanTrajectory trajectory;
};

struct ProbeBinding {
    std::size_t site_index = 0;
    std::size_t point_index = 0;
};

struct PreparedMission {
    GridMap grid;
    std::vector<SitePlan> sites;          // in visit order
    std::vector<GridPath> chassis_paths;  // start -> site 0 -> site 1 ...
    std::vector<ProbeBinding> probe_bindings;
    double travel_time = 0.0;             // s along the chassis paths
    Eigen::Vector2i start_cell{0, 0};
};

namespace detail {

// face-group split by the dominant outward-normal axis keeps each lawnmower
// sweep on one side of the solid
inline std::vector<std::vector<std::size_t>> face_groups(const SurfaceCloud& cloud) {
    std::vector<std::vector<std::size_t>> groups(6);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const Vec3& n = cloud.points[i].normal;
        int axis = 0;
        if (std::abs(n.y()) > std::abs(n[axis])) axis = 1;
        if (std::abs(n.z()) > std::abs(n[axis])) axis = 2;
        groups[static_cast<std::size_t>(axis * 2 + (n[axis] >= 0.0 ? 0 : 1))].push_back(i);
    }
    return groups;
}

inline ScanTrajectory concatenate(std::vector<ScanTrajectory> parts, double standoff) {
    ScanTrajectory merged;
    merged.standoff = standoff;
    for (auto& part : parts) {
        for (auto& seg : part.segments) {
            if (!merged.segments.empty() && seg.arc_length == 0.0) {
                seg.arc_length =
                    (seg.pose.translation - merged.segments.back().pose.translation).norm();
            }
            merged.segments.push_back(seg);
        }
    }
    return merged;
}

}  // namespace detail

/// Everything that does not depend on the dose policy: maps, per-object
/// clouds with outward normals, stop points, visit order, chassis paths,
/// scan trajectories, and probe-to-point bindings.
inline PreparedMission prepare_mission(const Scene& scene) {
    validate_scene(scene);
    PreparedMission prepared;
    prepared.grid = build_grid_map(scene);
    const OccupancyOctree tree = synthesize_scan(scene);
    const RiskRegistry registry = scene.registry();

    // per-object clouds and stop points
    std::vector<SitePlan> plans;
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const SceneObject& obj = scene.objects[i];
        const RiskClass risk = registry.classify(obj.label);
        Eigen::AlignedBox3d region = obj.shape.bounding_box();
        region.min() -= Vec3::Constant(2.0 * scene.mapping.octree_resolution);
        region.max() += Vec3::Constant(2.0 * scene.mapping.octree_resolution);

        const Point3 viewpoint = obj.shape.type == PrimitiveType::Patch
                                     ? Point3(obj.shape.center + 0.5 * obj.shape.normal)
                                     : obj.shape.center;
        SurfaceCloud cloud = extract_surface(
            tree, region, viewpoint, risk,
            SurfaceFilterParams{scene.mapping.outlier_k, scene.mapping.outlier_alpha});
        cloud.source_label = obj.label;
        cloud = estimate_normals(std::move(cloud), scene.mapping.normal_k);
        // the virtual sensor knows the scanned solid: flip estimated normals
        // that point into it
        for (auto& sp : cloud.points) {
            if (sp.normal.dot(outward_normal_at(obj.shape, sp.position)) < 0.0) {
                sp.normal = -sp.normal;
            }
        }

        SitePlan plan;
        plan.object_id = obj.id;
        plan.cloud = std::move(cloud);
        plan.site = make_site(prepared.grid, i, obj.label, obj.shape.footprint(), risk,
                              StopPointParams{scene.planner.stop_distance, 16});
        plans.push_back(std::move(plan));
    }

    // visit order and chassis paths
    std::vector<HotspotSite> sites;
    sites.reserve(plans.size());
    for (const auto& plan : plans) sites.push_back(plan.site);
    prepared.start_cell =
        prepared.grid.world_to_cell(scene.chassis_start.x(), scene.chassis_start.y());
    if (!prepared.grid.free_at(prepared.start_cell.x(), prepared.start_cell.y())) {
        throw ValidationError("chassis start cell is not free");
    }
    const std::vector<std::size_t> order = order_sites(prepared.grid, sites, prepared.start_cell);

    Eigen::Vector2i cursor = prepared.start_cell;
    for (std::size_t idx : order) {
        GridPath path = astar(prepared.grid, cursor, plans[idx].site.stop_point);
        cursor = plans[idx].site.stop_point;
        prepared.travel_time +=
            path.cost * prepared.grid.resolution / scene.planner.chassis_speed;
        prepared.chassis_paths.push_back(std::move(path));
        prepared.sites.push_back(std::move(plans[idx]));
    }

    // scan trajectories per site, sweeping one face group at a time
    const double lamp_length = scene.assembly.length_m;
    for (auto& plan : prepared.sites) {
        const Eigen::Vector2d stop_w = prepared.grid.cell_center(plan.site.stop_point);
        const ArmConfig& arm = scene.arm;
        const ReachablePredicate reachable = [stop_w, arm](const Pose& pose) {
            const Point3& p = pose.translation;
            return std::abs(p.x() - stop_w.x()) <= arm.reach &&
                   std::abs(p.y() - stop_w.y()) <= arm.reach && p.z() >= arm.z_min &&
                   p.z() <= arm.z_max;
        };
        ScanPathParams params;
        params.standoff = scene.mapping.standoff;
        params.row_spacing =
            scene.mapping.row_spacing > 0.0 ? scene.mapping.row_spacing : lamp_length;
        params.waypoint_step = scene.mapping.waypoint_step;

        std::vector<ScanTrajectory> parts;
        for (const auto& group : detail::face_groups(plan.cloud)) {
            if (group.empty()) continue;
            SurfaceCloud sub;
            sub.viewpoint = plan.cloud.viewpoint;
            for (std::size_t idx : group) sub.points.push_back(plan.cloud.points[idx]);
            try {
                parts.push_back(generate_scan_trajectory(sub, params, reachable));
            } catch (const NoReachablePoses&) {
                // an unreachable face may still be covered by neighboring
                // sweeps; a genuinely dark point raises UnreachablePoint later
            }
        }
        if (parts.empty()) {
            throw NoReachablePoses("no reachable scan poses for object '" + plan.object_id + "'");
        }
        plan.trajectory = detail::concatenate(std::move(parts), params.standoff);
    }

    // probe bindings: nearest cloud point of the probe's object
    for (const auto& probe : scene.probes) {
        std::size_t site_index = prepared.sites.size();
        for (std::size_t s = 0; s < prepared.sites.size(); ++s) {
            if (prepared.sites[s].object_id == probe.object_id) {
                site_index = s;
                break;
            }
        }
        if (site_index == prepared.sites.size()) {
            throw OrphanProbe("probe '" + probe.id + "' has no planned site");
        }
        const auto& points = prepared.sites[site_index].cloud.points;
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < points.size(); ++p) {
            const double d = (points[p].position - probe.position).norm();
            if (d < best_d) {
                best_d = d;
                best = p;
            }
        }
        if (best_d > 0.01) {
            throw OrphanProbe("probe '" + probe.id + "' is more than 1 cm from any surface point");
        }
        prepared.probe_bindings.push_back({site_index, best});
    }
    return prepared;
}

// ---------------------------------------------------------------------------
// Policy execution

struct ProbeReadout {
    std::string id;
    double dose = 0.0;  // mJ/cm^2
    RiskClass risk = RiskClass::NonHotspot;
    bool saturated = false;
};

struct CoverageMetrics {
    std::optional<double> hcr;  // empty when the scene has no hotspot probes
    std::optional<double> ocr;  // empty when the scene has no probes
};

/// HCR over hotspot probes, OCR over all probes, against the evaluation
/// thresholds.
inline CoverageMetrics evaluate_probes(const std::vector<ProbeReadout>& probes,
                                       const MetricThresholds& thresholds) {
    CoverageMetrics metrics;
    std::size_t hot = 0, hot_pass = 0, all_pass = 0;
    for (const auto& probe : probes) {
        if (probe.risk == RiskClass::Hotspot) {
            ++hot;
            if (probe.dose >= thresholds.hotspot) ++hot_pass;
        }
        if (probe.dose >= thresholds.overall) ++all_pass;
    }
    if (hot > 0) {
        metrics.hcr = static_cast<double>(hot_pass) / static_cast<double>(hot);
    }
    if (!probes.empty()) {
        metrics.ocr = static_cast<double>(all_pass) / static_cast<double>(probes.size());
    }
    return metrics;
}

struct SiteSummary {
    std::string object_id;
    std::string label;
    RiskClass risk = RiskClass::NonHotspot;
    std::size_t points = 0;
    std::size_t segments = 0;
    double irradiation_s = 0.0;
};

struct ClassDoseStats {
    std::size_t count = 0;
    double min_dose = 0.0;
    double mean_dose = 0.0;
};

struct MissionReport {
    std::string scene_name;
    std::string policy;
    std::uint64_t seed = 0;
    std::optional<double> hcr;
    std::optional<double> ocr;
    double et_s = 0.0;
    double travel_s = 0.0;
    double irradiation_s = 0.0;
    std::vector<ProbeReadout> probes;
    std::size_t point_count = 0;
    ClassDoseStats hotspot_points;
    ClassDoseStats nonhotspot_points;
    std::vector<SiteSummary> sites;
};

/// Per-site point doses for one policy run; index-aligned with
/// PreparedMission::sites and their cloud points.
using SiteDoses = std::vector<std::vector<double>>;

namespace detail {

inline void fill_dose_stats(const PreparedMission& prepared, const SiteDoses& doses,
                            MissionReport& report) {
    double hot_min = std::numeric_limits<double>::infinity(), hot_sum = 0.0;
    double cold_min = std::numeric_limits<double>::infinity(), cold_sum = 0.0;
    std::size_t hot_n = 0, cold_n = 0;
    for (std::size_t s = 0; s < prepared.sites.size(); ++s) {
        const auto& points = prepared.sites[s].cloud.points;
        for (std::size_t p = 0; p < points.size(); ++p) {
            const double dose = doses[s][p];
            if (points[p].risk == RiskClass::Hotspot) {
                hot_min = std::min(hot_min, dose);
                hot_sum += dose;
                ++hot_n;
            } else {
                cold_min = std::min(cold_min, dose);
                cold_sum += dose;
                ++cold_n;
            }
        }
    }
    report.point_count = hot_n + cold_n;
    report.hotspot_points = {hot_n, hot_n > 0 ? hot_min : 0.0,
                             hot_n > 0 ? hot_sum / static_cast<double>(hot_n) : 0.0};
    report.nonhotspot_points = {cold_n, cold_n > 0 ? cold_min : 0.0,
                                cold_n > 0 ? cold_sum / static_cast<double>(cold_n) : 0.0};
}

inline std::vector<ProbeReadout> read_probes(const Scene& scene, const PreparedMission& prepared,
                                             const SiteDoses& doses) {
    std::vector<ProbeReadout> readouts;
    for (std::size_t i = 0; i < scene.probes.size(); ++i) {
        const ProbeBinding& binding = prepared.probe_bindings[i];
        ProbeReadout r;
        r.id = scene.probes[i].id;
        r.dose = doses[binding.site_index][binding.point_index];
        r.risk = prepared.sites[binding.site_index].cloud.points[binding.point_index].risk;
        r.saturated = r.dose > scene.probe_saturation;
        readouts.push_back(std::move(r));
    }
    return readouts;
}

}  // namespace detail

/// Run one manipulator policy (Differentiated or UniformHigh) over the
/// prepared mission; returns the report and, optionally, the per-point doses
/// and per-site profiles.
inline MissionReport run_arm_policy(const Scene& scene, const PreparedMission& prepared,
                                    Policy policy, SiteDoses* doses_out = nullptr,
                                    std::vector<SpeedProfile>* profiles_out = nullptr) {
    MissionReport report;
    report.scene_name = scene.name;
    report.policy = policy_name(policy);
    report.seed = scene.seed;
    report.travel_s = prepared.travel_time;

    DoseTargets targets = scene.targets;
    if (policy == Policy::UniformHigh) {
        targets.nonhotspot_min = targets.hotspot_min;
    }

    const LampAssembly assembly = scene.assembly.make();
    SiteDoses doses(prepared.sites.size());
    for (std::size_t s = 0; s < prepared.sites.size(); ++s) {
        const SitePlan& plan = prepared.sites[s];
        const DoseMatrix dm = build_dose_matrix(plan.trajectory, plan.cloud.points, assembly);
        OptimizeOptions options;
        options.floor = scene.arm.dwell_floor;
        options.v_max = scene.arm.v_max;
        options.row_cap = scene.planner.lp_row_cap;
        options.seed = scene.seed;
        SpeedProfile profile;
        try {
            profile = optimize_dwell(dm, plan.cloud.points, targets, options);
        } catch (UnreachablePoint& e) {
            throw UnreachablePoint(e.index);  // keep the point id visible to the caller
        }

        doses[s].resize(plan.cloud.points.size(), 0.0);
        for (std::size_t p = 0; p < plan.cloud.points.size(); ++p) {
            double dose = 0.0;
            for (std::size_t i = 0; i < profile.dwell.size(); ++i) {
                dose += dm.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(p)) *
                        profile.dwell[i];
            }
            doses[s][p] = dose;
        }
        report.irradiation_s += profile.total_time;
        report.sites.push_back({plan.object_id, plan.site.label, plan.site.risk,
                                plan.cloud.points.size(), profile.dwell.size(),
                                profile.total_time});
        if (profiles_out) profiles_out->push_back(std::move(profile));
    }

    report.et_s = report.travel_s + report.irradiation_s;
    report.probes = detail::read_probes(scene, prepared, doses);
    const CoverageMetrics metrics = evaluate_probes(report.probes, scene.thresholds);
    report.hcr = metrics.hcr;
    report.ocr = metrics.ocr;
    detail::fill_dose_stats(prepared, doses, report);
    if (doses_out) *doses_out = std::move(doses);
    return report;
}

/// Stationary-tower policy: a vertical lamp assembly parked at each station
/// for its configured duration, with hard ray-cast occlusion.
inline MissionReport run_station_policy(const Scene& scene, const PreparedMission& prepared,
                                        SiteDoses* doses_out = nullptr) {
    if (scene.stations.empty()) {
        throw ValidationError("FixedStation policy needs at least one station in the scene");
    }
    MissionReport report;
    report.scene_name = scene.name;
    report.policy = policy_name(Policy::FixedStation);
    report.seed = scene.seed;

    // travel start -> station 1 -> station 2 ...
    Eigen::Vector2i cursor = prepared.start_cell;
    for (const auto& station : scene.stations) {
        const Eigen::Vector2i cell =
            prepared.grid.world_to_cell(station.position.x(), station.position.y());
        const GridPath path = astar(prepared.grid, cursor, cell);
        report.travel_s += path.cost * prepared.grid.resolution / scene.planner.chassis_speed;
        report.irradiation_s += station.duration_s;
        cursor = cell;
    }

    SiteDoses doses(prepared.sites.size());
    for (std::size_t s = 0; s < prepared.sites.size(); ++s) {
        doses[s].assign(prepared.sites[s].cloud.points.size(), 0.0);
    }
    for (const auto& station : scene.stations) {
        // lamp axis vertical: local x maps to world z
        Pose tower_pose;
        tower_pose.translation =
            Point3(station.position.x(), station.position.y(), scene.tower.center_height);
        tower_pose.rotation = Quat(Eigen::AngleAxisd(-std::numbers::pi / 2.0, Vec3::UnitY()));
        LampAssembly tower = LampAssembly::make(scene.tower.flux_w, scene.tower.length_m,
                                                scene.tower.spacing_m, tower_pose);
        for (std::size_t s = 0; s < prepared.sites.size(); ++s) {
            const auto& points = prepared.sites[s].cloud.points;
            for (std::size_t p = 0; p < points.size(); ++p) {
                const Point3 eye = points[p].position + 1e-5 * points[p].normal;
                const Pose inv = tower.pose.inverse();
                const Point3 p_lamp = inv.apply(points[p].position);
                const Vec3 n_lamp = inv.rotation * points[p].normal;
                double e_total = 0.0;
                for (const Lamp& lamp : tower.lamps) {
                    const Point3 lamp_center_world =
                        tower.pose.apply(Point3(0.0, lamp.y_offset, 0.0));
                    if (ray_occluded(scene, eye, lamp_center_world)) {
                        continue;
                    }
                    e_total += irradiance_closed_form(lamp, p_lamp, n_lamp).w_m2;
                }
                doses[s][p] += accumulate_dose(Irradiance{e_total}, station.duration_s);
            }
        }
    }

    report.et_s = report.travel_s + report.irradiation_s;
    report.probes = detail::read_probes(scene, prepared, doses);
    const CoverageMetrics metrics = evaluate_probes(report.probes, scene.thresholds);
    report.hcr = metrics.hcr;
    report.ocr = metrics.ocr;
    detail::fill_dose_stats(prepared, doses, report);
    for (std::size_t s = 0; s < prepared.sites.size(); ++s) {
        report.sites.push_back({prepared.sites[s].object_id, prepared.sites[s].site.label,
                                prepared.sites[s].site.risk,
                                prepared.sites[s].cloud.points.size(), 0, 0.0});
    }
    if (doses_out) *doses_out = std::move(doses);
    return report;
}

inline MissionReport run_policy(const Scene& scene, const PreparedMission& prepared, Policy policy,
                                SiteDoses* doses_out = nullptr,
                                std::vector<SpeedProfile>* profiles_out = nullptr) {
    if (policy == Policy::FixedStation) {
        return run_station_policy(scene, prepared, doses_out);
    }
    return run_arm_policy(scene, prepared, policy, doses_out, profiles_out);
}

/// Full mission on a scene: build maps, plan, optimize, accumulate dose,
/// evaluate the coverage metrics.
inline MissionReport run_mission(const Scene& scene, Policy policy) {
    const PreparedMission prepared = prepare_mission(scene);
    return run_policy(scene, prepared, policy);
}

/// All surface points of the mission with this run's doses, for PLY export.
inline SurfaceCloud merged_cloud(const PreparedMission& prepared, const SiteDoses& doses) {
    SurfaceCloud merged;
    merged.source_label = "mission";
    for (std::size_t s = 0; s < prepared.sites.size(); ++s) {
        for (std::size_t p = 0; p < prepared.sites[s].cloud.points.size(); ++p) {
            SurfacePoint sp = prepared.sites[s].cloud.points[p];
            sp.dose = doses[s][p];
            merged.points.push_back(sp);
        }
    }
    return merged;
}

// ---------------------------------------------------------------------------
// Report serialization

inline std::string format_mmss(double seconds) {
    const long total = std::lround(seconds);
    std::ostringstream os;
    os << total / 60 << ':' << (total % 60 < 10 ? "0" : "") << total % 60;
    return os.str();
}

inline nlohmann::ordered_json report_to_json(const MissionReport& report) {
    nlohmann::ordered_json j;
    j["scene"] = report.scene_name;
    j["policy"] = report.policy;
    j["seed"] = report.seed;
    nlohmann::ordered_json metrics;
    metrics["hcr"] = report.hcr.has_value() ? nlohmann::ordered_json(*report.hcr)
                                            : nlohmann::ordered_json(nullptr);
    metrics["ocr"] = report.ocr.has_value() ? nlohmann::ordered_json(*report.ocr)
                                            : nlohmann::ordered_json(nullptr);
    metrics["et_s"] = report.et_s;
    metrics["et_mmss"] = format_mmss(report.et_s);
    metrics["travel_s"] = report.travel_s;
    metrics["irradiation_s"] = report.irradiation_s;
    j["metrics"] = metrics;
    nlohmann::ordered_json points;
    points["count"] = report.point_count;
    points["hotspot"] = {{"count", report.hotspot_points.count},
                         {"min_dose", report.hotspot_points.min_dose},
                         {"mean_dose", report.hotspot_points.mean_dose}};
    points["nonhotspot"] = {{"count", report.nonhotspot_points.count},
                            {"min_dose", report.nonhotspot_points.min_dose},
                            {"mean_dose", report.nonhotspot_points.mean_dose}};
    j["points"] = points;
    nlohmann::ordered_json probes = nlohmann::ordered_json::array();
    for (const auto& probe : report.probes) {
        probes.push_back({{"id", probe.id},
                          {"dose_mJ_cm2", probe.dose},
                          {"risk", probe.risk == RiskClass::Hotspot ? "hotspot" : "nonhotspot"},
                          {"saturated", probe.saturated}});
    }
    j["probes"] = probes;
    nlohmann::ordered_json sites = nlohmann::ordered_json::array();
    for (const auto& site : report.sites) {
        sites.push_back({{"object", site.object_id},
                         {"label", site.label},
                         {"risk", site.risk == RiskClass::Hotspot ? "hotspot" : "nonhotspot"},
                         {"points", site.points},
                         {"segments", site.segments},
                         {"irradiation_s", site.irradiation_s}});
    }
    j["sites"] = sites;
    return j;
}

inline std::string format_pct(const std::optional<double>& value) {
    if (!value.has_value()) {
        return "n/a";
    }
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << (*value * 100.0) << '%';
    return os.str();
}

/// Side-by-side coverage table, one row per policy.
inline void write_report_table(std::ostream& os, const std::vector<MissionReport>& reports) {
    os << "policy          HCR      OCR      ET\n";
    for (const auto& report : reports) {
        std::string name = report.policy;
        name.resize(16, ' ');
        std::string hcr = format_pct(report.hcr);
        hcr.resize(9, ' ');
        std::string ocr = format_pct(report.ocr);
        ocr.resize(9, ' ');
        os << name << hcr << ocr << format_mmss(report.et_s) << '\n';
    }
}

}  // namespace uvdose
