#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "uvdose/errors.hpp"
#include "uvdose/geometry.hpp"
#include "uvdose/irradiance.hpp"
#include "uvdose/lp.hpp"
#include "uvdose/scan_path.hpp"

namespace uvdose {

/// Irradiance of every trajectory segment on every surface point,
/// entries[i](n) in mW/cm^2; multiplied by dwell seconds this is dose in
/// mJ/cm^2. Rows are segments, columns are points.
struct DoseMatrix {
    Eigen::MatrixXd entries;
    std::vector<double> arc_lengths;

    Eigen::Index num_segments() const { return entries.rows(); }
    Eigen::Index num_points() const { return entries.cols(); }
};

struct DoseTargets {
    double hotspot_min = 22.0;     // mJ/cm^2
    double nonhotspot_min = 5.0;   // mJ/cm^2

    double for_risk(RiskClass risk) const {
        return risk == RiskClass::Hotspot ? hotspot_min : nonhotspot_min;
    }
};

struct SpeedProfile {
    std::vector<double> dwell;       // s per segment, never below the floor
    std::vector<double> speed;       // m/s, arc_length / dwell
    std::vector<double> arc_length;  // m
    double total_time = 0.0;         // s
};

using VisibilityPredicate = std::function<bool(const Pose&, const SurfacePoint&)>;

/// Evaluate the assembly at each segment pose against each surface point.
/// The optional visibility predicate zeroes occluded pairs.
inline DoseMatrix build_dose_matrix(const ScanTrajectory& traj,
                                    const std::vector<SurfacePoint>& points,
                                    const LampAssembly& assembly,
                                    const VisibilityPredicate& visibility = nullptr) {
    if (traj.segments.empty() || points.empty()) {
        throw DimensionMismatch("dose matrix needs at least one segment and one point");
    }
    DoseMatrix dm;
    dm.entries.resize(static_cast<Eigen::Index>(traj.segments.size()),
                      static_cast<Eigen::Index>(points.size()));
    dm.arc_lengths.reserve(traj.segments.size());
    for (std::size_t i = 0; i < traj.segments.size(); ++i) {
        dm.arc_lengths.push_back(traj.segments[i].arc_length);
        LampAssembly at_pose = assembly;
        at_pose.pose = traj.segments[i].pose;
        for (std::size_t n = 0; n < points.size(); ++n) {
            if (visibility && !visibility(traj.segments[i].pose, points[n])) {
                dm.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) = 0.0;
                continue;
            }
            try {
                dm.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(n)) =
                    irradiance_assembly(at_pose, points[n]).to_mW_cm2();
            } catch (const DegenerateGeometry&) {
                throw DegenerateGeometry("degenerate geometry at segment " + std::to_string(i) +
                                         ", point " + std::to_string(n));
            }
        }
    }
    return dm;
}

struct OptimizeOptions {
    double floor = 0.1;          // s, dwell lower bound
    double v_max = 0.25;         // m/s, Cartesian speed limit of the arm
    std::size_t row_cap = 2000;  // constraint subsampling threshold
    int max_rounds = 5;          // re-add/re-solve rounds for violated points
    std::uint64_t seed = 0;      // subsample start
};

/// Farthest-point subsample: greedy max-min selection starting at seed % n.
inline std::vector<std::size_t> farthest_point_subsample(const std::vector<SurfacePoint>& points,
                                                         std::size_t k, std::uint64_t seed) {
    const std::size_t n = points.size();
    if (k >= n) {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        return all;
    }
    std::vector<std::size_t> selected;
    selected.reserve(k);
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    std::size_t current = seed % n;
    for (std::size_t picked = 0; picked < k; ++picked) {
        selected.push_back(current);
        std::size_t best = 0;
        double best_dist = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = (points[i].position - points[current].position).squaredNorm();
            min_dist[i] = std::min(min_dist[i], d);
            if (min_dist[i] > best_dist) {
                best_dist = min_dist[i];
                best = i;
            }
        }
        current = best;
    }
    return selected;
}

namespace detail {

inline Eigen::VectorXd delivered_doses(const DoseMatrix& dm, const Eigen::VectorXd& dwell) {
    return dm.entries.transpose() * dwell;
}

}  // namespace detail

/// Algorithm core: minimize total dwell subject to each point reaching its
/// risk-class dose target, with dwell floors merged with the arm speed limit
/// (lb_i = max(floor, arc_i / v_max)). When the point count exceeds row_cap,
/// a farthest-point subsample is constrained first and violated points are
/// re-added until the full set verifies.
inline SpeedProfile optimize_dwell(const DoseMatrix& dm, const std::vector<SurfacePoint>& points,
                                   const DoseTargets& targets, const OptimizeOptions& options = {}) {
    const auto n_points = static_cast<std::size_t>(dm.num_points());
    const auto n_segments = static_cast<std::size_t>(dm.num_segments());
    if (n_points != points.size() || dm.arc_lengths.size() != n_segments) {
        throw DimensionMismatch("dose matrix does not match the point set");
    }
    for (std::size_t n = 0; n < n_points; ++n) {
        if (dm.entries.col(static_cast<Eigen::Index>(n)).maxCoeff() <= 0.0) {
            throw UnreachablePoint(n);
        }
    }

    Eigen::VectorXd lb(static_cast<Eigen::Index>(n_segments));
    for (std::size_t i = 0; i < n_segments; ++i) {
        lb(static_cast<Eigen::Index>(i)) =
            std::max(options.floor, dm.arc_lengths[i] / options.v_max);
    }
    Eigen::VectorXd full_targets(static_cast<Eigen::Index>(n_points));
    for (std::size_t n = 0; n < n_points; ++n) {
        full_targets(static_cast<Eigen::Index>(n)) = targets.for_risk(points[n].risk);
    }

    std::vector<std::size_t> rows = farthest_point_subsample(
        points, std::min(options.row_cap, n_points), options.seed);
    std::vector<bool> in_rows(n_points, false);
    for (std::size_t r : rows) in_rows[r] = true;

    const double slack = 1e-6 * std::max(1.0, full_targets.maxCoeff());
    Eigen::VectorXd dwell;
    for (int round = 0;; ++round) {
        LinearProgram lp;
        lp.A.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_segments));
        lp.b.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            lp.A.row(static_cast<Eigen::Index>(r)) =
                dm.entries.col(static_cast<Eigen::Index>(rows[r])).transpose();
            lp.b(static_cast<Eigen::Index>(r)) = full_targets(static_cast<Eigen::Index>(rows[r]));
        }
        lp.lb = lb;
        lp.c = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_segments));

        const LpSolution sol = solve(lp);
        if (sol.status != LpStatus::Optimal) {
            throw Error("dwell LP did not reach an optimal solution");
        }
        dwell = sol.t.cwiseMax(lb);

        const Eigen::VectorXd delivered = detail::delivered_doses(dm, dwell);
        std::vector<std::size_t> violated;
        for (std::size_t n = 0; n < n_points; ++n) {
            if (!in_rows[n] &&
                delivered(static_cast<Eigen::Index>(n)) < full_targets(static_cast<Eigen::Index>(n)) - slack) {
                violated.push_back(n);
            }
        }
        if (violated.empty()) {
            break;
        }
        if (round + 1 >= options.max_rounds) {
            throw Error("constraint subsampling failed to cover all points in " +
                        std::to_string(options.max_rounds) + " rounds");
        }
        for (std::size_t v : violated) {
            rows.push_back(v);
            in_rows[v] = true;
        }
    }

    // nudge dwell so every delivered dose actually reaches its target
    const Eigen::VectorXd delivered = detail::delivered_doses(dm, dwell);
    double scale = 1.0;
    for (std::size_t n = 0; n < n_points; ++n) {
        scale = std::max(scale, full_targets(static_cast<Eigen::Index>(n)) /
                                    delivered(static_cast<Eigen::Index>(n)));
    }
    if (scale > 1.0 + 1e-4) {
        throw Error("dwell solution misses a dose target beyond tolerance");
    }
    dwell *= scale;

    SpeedProfile profile;
    profile.dwell.resize(n_segments);
    profile.speed.resize(n_segments);
    profile.arc_length = dm.arc_lengths;
    for (std::size_t i = 0; i < n_segments; ++i) {
        profile.dwell[i] = dwell(static_cast<Eigen::Index>(i));
        profile.speed[i] = dm.arc_lengths[i] > 0.0 ? dm.arc_lengths[i] / profile.dwell[i] : 0.0;
        profile.total_time += profile.dwell[i];
    }
    return profile;
}

struct PolicyComparison {
    SpeedProfile uniform;         // every point held to the hotspot standard
    SpeedProfile differentiated;  // per-risk-class standards
    double t_uniform = 0.0;
    double t_differentiated = 0.0;
};

/// Total dwell time under the uniform-high policy vs the hotspot-
/// differentiated policy on the same dose matrix.
inline PolicyComparison compare_uniform_vs_differentiated(const DoseMatrix& dm,
                                                          const std::vector<SurfacePoint>& points,
                                                          const DoseTargets& targets,
                                                          const OptimizeOptions& options = {}) {
    PolicyComparison cmp;
    DoseTargets uniform_targets = targets;
    uniform_targets.nonhotspot_min = targets.hotspot_min;
    cmp.uniform = optimize_dwell(dm, points, uniform_targets, options);
    cmp.differentiated = optimize_dwell(dm, points, targets, options);
    cmp.t_uniform = cmp.uniform.total_time;
    cmp.t_differentiated = cmp.differentiated.total_time;
    return cmp;
}

// ---------------------------------------------------------------------------
// CSV exports

inline void write_speed_profile_csv(std::ostream& os, const SpeedProfile& profile) {
    os << "segment_index,arc_length_m,dwell_s,speed_m_per_s\n";
    for (std::size_t i = 0; i < profile.dwell.size(); ++i) {
        os << i << ',' << profile.arc_length[i] << ',' << profile.dwell[i] << ','
           << profile.speed[i] << '\n';
    }
}

inline void write_dose_report_csv(std::ostream& os, const std::vector<SurfacePoint>& points,
                                  const Eigen::VectorXd& delivered, const DoseTargets& targets) {
    os << "point_index,x,y,z,risk,dose_mJ_cm2,target_mJ_cm2,margin\n";
    for (std::size_t n = 0; n < points.size(); ++n) {
        const double target = targets.for_risk(points[n].risk);
        const double dose = delivered(static_cast<Eigen::Index>(n));
        os << n << ',' << points[n].position.x() << ',' << points[n].position.y() << ','
           << points[n].position.z() << ','
           << (points[n].risk == RiskClass::Hotspot ? "hotspot" : "nonhotspot") << ',' << dose
           << ',' << target << ',' << dose - target << '\n';
    }
}

}  // namespace uvdose
