#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uvdose/astar.hpp"
#include "uvdose/errors.hpp"
#include "uvdose/grid_map.hpp"
#include "uvdose/optimizer.hpp"
#include "uvdose/scan_path.hpp"

namespace uvdose {

namespace detail {

inline std::string normalize_label(std::string label) {
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::replace(label.begin(), label.end(), '_', ' ');
    return label;
}

}  // namespace detail

/// Semantic label to risk class lookup; unknown labels default to NonHotspot.
class RiskRegistry {
public:
    static RiskRegistry with_defaults() {
        RiskRegistry r;
        for (const char* label :
             {"armless office chair", "examination table", "side rail", "medical machine",
              "switch", "sink", "table", "door handle", "bed rail"}) {
            r.set(label, RiskClass::Hotspot);
        }
        return r;
    }

    static RiskRegistry from_json(const nlohmann::json& config) {
        RiskRegistry r = with_defaults();
        for (const auto& [label, value] : config.items()) {
            r.set(label, value.get<std::string>() == "hotspot" ? RiskClass::Hotspot
                                                               : RiskClass::NonHotspot);
        }
        return r;
    }

    void set(const std::string& label, RiskClass risk) {
        labels_[detail::normalize_label(label)] = risk;
    }

    RiskClass classify(const std::string& label) const {
        const auto it = labels_.find(detail::normalize_label(label));
        return it == labels_.end() ? RiskClass::NonHotspot : it->second;
    }

private:
    std::map<std::string, RiskClass> labels_;
};

inline std::vector<RiskClass> classify(const RiskRegistry& registry,
                                       const std::vector<std::string>& labels) {
    std::vector<RiskClass> out;
    out.reserve(labels.size());
    for (const auto& label : labels) {
        out.push_back(registry.classify(label));
    }
    return out;
}

struct Detection {
    std::string label;
    Eigen::AlignedBox2d footprint;  // world xy extent
};

/// One object to disinfect: its footprint on the grid and the free cell the
/// chassis stops at while the arm works.
struct HotspotSite {
    std::size_t object_index = 0;
    std::string label;
    RiskClass risk = RiskClass::Hotspot;
    std::vector<Eigen::Vector2i> footprint_cells;
    Eigen::Vector2i stop_point{0, 0};
};

struct StopPointParams {
    double distance = 0.6;  // m from the footprint centroid
    int bearings = 16;      // candidate ring sampling
};

/// Stop point selection: sample a ring of bearings around the footprint
/// centroid, keep free cells, pick the one whose center is nearest the
/// centroid (ties by smallest bearing index).
inline HotspotSite make_site(const GridMap& grid, std::size_t object_index,
                             const std::string& label, const Eigen::AlignedBox2d& footprint,
                             RiskClass risk, const StopPointParams& params = {}) {
    HotspotSite site;
    site.object_index = object_index;
    site.label = label;
    site.risk = risk;

    const Eigen::Vector2i lo = grid.world_to_cell(footprint.min().x(), footprint.min().y());
    const Eigen::Vector2i hi = grid.world_to_cell(footprint.max().x(), footprint.max().y());
    for (int y = lo.y(); y <= hi.y(); ++y) {
        for (int x = lo.x(); x <= hi.x(); ++x) {
            if (grid.in_bounds(x, y)) {
                site.footprint_cells.emplace_back(x, y);
            }
        }
    }

    const Eigen::Vector2d centroid = footprint.center();
    std::optional<Eigen::Vector2i> best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int k = 0; k < params.bearings; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / params.bearings;
        const Eigen::Vector2d candidate =
            centroid + params.distance * Eigen::Vector2d(std::cos(theta), std::sin(theta));
        const Eigen::Vector2i cell = grid.world_to_cell(candidate.x(), candidate.y());
        if (!grid.free_at(cell.x(), cell.y())) {
            continue;
        }
        const double dist = (grid.cell_center(cell) - centroid).norm();
        if (dist < best_dist) {
            best_dist = dist;
            best = cell;
        }
    }
    if (!best) {
        throw NoFreeStopPoint("no free stop cell around footprint of '" + label + "'");
    }
    site.stop_point = *best;
    return site;
}

/// Project labeled detections onto the grid: hotspot-classified detections
/// become sites with chassis stop points, the rest are skipped.
inline std::vector<HotspotSite> mark_hotspots(const GridMap& grid,
                                              const std::vector<Detection>& detections,
                                              const RiskRegistry& registry,
                                              const StopPointParams& params = {}) {
    std::vector<HotspotSite> sites;
    for (std::size_t i = 0; i < detections.size(); ++i) {
        if (registry.classify(detections[i].label) != RiskClass::Hotspot) {
            continue;
        }
        sites.push_back(make_site(grid, i, detections[i].label, detections[i].footprint,
                                  RiskClass::Hotspot, params));
    }
    return sites;
}

namespace detail {

// open-tour length over a matrix whose row/col 0 is the start
inline double open_tour_cost(const Eigen::MatrixXd& dist, const std::vector<std::size_t>& tour) {
    double cost = dist(0, static_cast<Eigen::Index>(tour[0] + 1));
    for (std::size_t i = 0; i + 1 < tour.size(); ++i) {
        cost += dist(static_cast<Eigen::Index>(tour[i] + 1),
                     static_cast<Eigen::Index>(tour[i + 1] + 1));
    }
    return cost;
}

// repeated 2-opt segment reversals until no move improves the open tour
inline void two_opt_improve(const Eigen::MatrixXd& dist, std::vector<std::size_t>& tour) {
    double current = open_tour_cost(dist, tour);
    bool improved = true;
    while (improved) {
        improved = false;
        for (std::size_t i = 0; i < tour.size(); ++i) {
            for (std::size_t j = i + 1; j < tour.size(); ++j) {
                std::vector<std::size_t> candidate = tour;
                std::reverse(candidate.begin() + static_cast<std::ptrdiff_t>(i),
                             candidate.begin() + static_cast<std::ptrdiff_t>(j) + 1);
                const double cost = open_tour_cost(dist, candidate);
                if (cost < current - 1e-12) {
                    tour = std::move(candidate);
                    current = cost;
                    improved = true;
                }
            }
        }
    }
}

inline std::vector<std::size_t> nearest_neighbor_tour(const Eigen::MatrixXd& dist,
                                                      std::size_t n) {
    std::vector<std::size_t> tour;
    std::vector<bool> used(n, false);
    std::size_t current = 0;  // matrix row 0 = start
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (!used[j] && dist(static_cast<Eigen::Index>(current),
                                 static_cast<Eigen::Index>(j + 1)) < best_d) {
                best_d = dist(static_cast<Eigen::Index>(current), static_cast<Eigen::Index>(j + 1));
                best = j;
            }
        }
        used[best] = true;
        tour.push_back(best);
        current = best + 1;
    }
    return tour;
}

// exact open-path order by Held-Karp dynamic programming, n <= ~12
inline std::vector<std::size_t> exact_order(const Eigen::MatrixXd& dist, std::size_t n) {
    const std::size_t full = (std::size_t{1} << n) - 1;
    std::vector<std::vector<double>> dp(full + 1,
                                        std::vector<double>(n, std::numeric_limits<double>::infinity()));
    std::vector<std::vector<std::size_t>> parent(full + 1, std::vector<std::size_t>(n, n));
    for (std::size_t j = 0; j < n; ++j) {
        dp[std::size_t{1} << j][j] = dist(0, static_cast<Eigen::Index>(j + 1));
    }
    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t j = 0; j < n; ++j) {
            if (!(mask & (std::size_t{1} << j)) || std::isinf(dp[mask][j])) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (mask & (std::size_t{1} << k)) continue;
                const std::size_t next = mask | (std::size_t{1} << k);
                const double cost = dp[mask][j] + dist(static_cast<Eigen::Index>(j + 1),
                                                       static_cast<Eigen::Index>(k + 1));
                if (cost < dp[next][k]) {
                    dp[next][k] = cost;
                    parent[next][k] = j;
                }
            }
        }
    }
    std::size_t end = 0;
    for (std::size_t j = 1; j < n; ++j) {
        if (dp[full][j] < dp[full][end]) end = j;
    }
    std::vector<std::size_t> tour;
    std::size_t mask = full, j = end;
    while (j < n) {
        tour.push_back(j);
        const std::size_t prev = parent[mask][j];
        mask &= ~(std::size_t{1} << j);
        j = prev;
    }
    std::reverse(tour.begin(), tour.end());
    return tour;
}

}  // namespace detail

/// Visit order over the site stop points, distances measured as A* path
/// costs on the grid. Up to 12 sites the order is exact (Held-Karp); beyond
/// that a nearest-neighbor tour from the start improved by 2-opt.
inline std::vector<std::size_t> order_sites(const GridMap& grid,
                                            const std::vector<HotspotSite>& sites,
                                            const Eigen::Vector2i& start) {
    const std::size_t n = sites.size();
    if (n == 0) {
        throw Error("order_sites needs at least one site");
    }

    // distance matrix: row/col 0 is the start cell, 1..n are sites
    Eigen::MatrixXd dist(n + 1, n + 1);
    dist.setZero();
    const auto cell_of = [&](std::size_t i) {
        return i == 0 ? start : sites[i - 1].stop_point;
    };
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            try {
                const double d = astar(grid, cell_of(i), cell_of(j)).cost;
                dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
                dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
            } catch (const NoPath&) {
                throw UnreachableSite(j - 1);
            }
        }
    }

    if (n <= 12) {
        return detail::exact_order(dist, n);
    }
    std::vector<std::size_t> tour = detail::nearest_neighbor_tour(dist, n);
    detail::two_opt_improve(dist, tour);
    return tour;
}

/// Full mission: sites in visit order, the chassis paths between consecutive
/// stops, and each site's scan trajectory with its optimized speed profile.
struct MissionPlan {
    std::vector<HotspotSite> sites;
    std::vector<GridPath> chassis_paths;  // start -> site0, site0 -> site1, ...
    std::vector<ScanTrajectory> trajectories;
    std::vector<SpeedProfile> profiles;
};

}  // namespace uvdose
