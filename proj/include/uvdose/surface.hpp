#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "uvdose/errors.hpp"
#include "uvdose/geometry.hpp"
#include "uvdose/kdtree.hpp"
#include "uvdose/octree.hpp"

namespace uvdose {

/// Point cloud of disinfection targets extracted from the occupancy map.
/// `viewpoint` is the sensor origin the normals are oriented toward.
struct SurfaceCloud {
    std::vector<SurfacePoint> points;
    std::string source_label;
    Point3 viewpoint{0, 0, 0};
};

struct SurfaceFilterParams {
    int k_filter = 8;    // neighbors for the statistical outlier filter
    double alpha = 1.0;  // removal threshold: mean + alpha * stddev
};

/// Occupied-leaf centers inside `region`, one point per leaf, with the
/// statistical outlier filter applied (points whose mean k-NN distance
/// exceeds mean + alpha * stddev are dropped).
inline SurfaceCloud extract_surface(const OccupancyOctree& tree, const Eigen::AlignedBox3d& region,
                                    const Point3& viewpoint, RiskClass risk,
                                    const SurfaceFilterParams& params = {}) {
    std::vector<Point3> centers;
    std::unordered_set<std::string> seen_leaves;
    tree.for_each_occupied([&](const Point3& c, double) {
        if (region.contains(c)) {
            std::ostringstream key;
            key << std::llround(c.x() * 1e6) << ':' << std::llround(c.y() * 1e6) << ':'
                << std::llround(c.z() * 1e6);
            if (seen_leaves.insert(key.str()).second) {
                centers.push_back(c);
            }
        }
    });
    if (centers.empty()) {
        throw EmptyRegion("no occupied leaves inside region");
    }

    std::vector<bool> keep(centers.size(), true);
    const auto k = static_cast<std::size_t>(params.k_filter);
    if (centers.size() > k) {
        KdTree3 tree_pts(centers);
        std::vector<double> mean_dist(centers.size());
        for (std::size_t i = 0; i < centers.size(); ++i) {
            double sum = 0.0;
            for (std::size_t j : tree_pts.knn(centers[i], k, i)) {
                sum += (centers[j] - centers[i]).norm();
            }
            mean_dist[i] = sum / static_cast<double>(k);
        }
        double mean = 0.0;
        for (double d : mean_dist) mean += d;
        mean /= static_cast<double>(mean_dist.size());
        double var = 0.0;
        for (double d : mean_dist) var += (d - mean) * (d - mean);
        var /= static_cast<double>(mean_dist.size());
        const double cutoff = mean + params.alpha * std::sqrt(var);
        for (std::size_t i = 0; i < centers.size(); ++i) {
            keep[i] = mean_dist[i] <= cutoff;
        }
    }

    SurfaceCloud cloud;
    cloud.viewpoint = viewpoint;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        if (keep[i]) {
            SurfacePoint sp;
            sp.position = centers[i];
            sp.risk = risk;
            cloud.points.push_back(sp);
        }
    }
    return cloud;
}

/// Per-point normal from the weighted covariance of the k nearest neighbors:
/// the eigenvector of the smallest eigenvalue, re-oriented toward the cloud's
/// viewpoint (ties resolved toward +z). Weights taper with distance from the
/// query point ((1-t)^2 (1+2t) over the neighborhood radius), which keeps the
/// estimate radial on curved surfaces where unweighted PCA is biased by
/// neighborhood asymmetry.
inline SurfaceCloud estimate_normals(SurfaceCloud cloud, int k = 12) {
    const auto n = cloud.points.size();
    if (n < static_cast<std::size_t>(k) + 1) {
        throw TooFewPoints("normal estimation needs at least k+1 points");
    }
    std::vector<Point3> positions(n);
    for (std::size_t i = 0; i < n; ++i) {
        positions[i] = cloud.points[i].position;
    }
    KdTree3 tree(positions);

    std::vector<Point3> sample;
    std::vector<double> weights;
    for (std::size_t i = 0; i < n; ++i) {
        const auto neighbors = tree.knn(positions[i], static_cast<std::size_t>(k), i);
        sample.assign(1, positions[i]);
        for (std::size_t j : neighbors) sample.push_back(positions[j]);

        double d_max = 0.0;
        for (const Point3& p : sample) d_max = std::max(d_max, (p - positions[i]).norm());
        d_max *= 1.0001;  // keep the farthest neighbor at nonzero weight

        weights.resize(sample.size());
        Point3 mean = Point3::Zero();
        double w_sum = 0.0;
        for (std::size_t s = 0; s < sample.size(); ++s) {
            const double t = (sample[s] - positions[i]).norm() / d_max;
            weights[s] = (1.0 - t) * (1.0 - t) * (1.0 + 2.0 * t);
            mean += weights[s] * sample[s];
            w_sum += weights[s];
        }
        mean /= w_sum;

        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (std::size_t s = 0; s < sample.size(); ++s) {
            const Vec3 d = sample[s] - mean;
            cov += weights[s] * (d * d.transpose());
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
        Vec3 normal = solver.eigenvectors().col(0).normalized();

        const double toward = normal.dot(cloud.viewpoint - positions[i]);
        if (toward < 0.0 || (toward == 0.0 && normal.z() < 0.0)) {
            normal = -normal;
        }
        cloud.points[i].normal = normal;
    }
    return cloud;
}

// ---------------------------------------------------------------------------
// PLY import/export (ascii) with nx, ny, nz, risk (0/1) and dose scalars.

inline void write_ply(std::ostream& os, const SurfaceCloud& cloud, bool with_color = false) {
    double max_dose = 0.0;
    for (const SurfacePoint& sp : cloud.points) {
        max_dose = std::max(max_dose, sp.dose);
    }
    os << "ply\n"
       << "format ascii 1.0\n"
       << "comment label " << (cloud.source_label.empty() ? "unlabeled" : cloud.source_label)
       << "\n"
       << "comment viewpoint " << std::setprecision(17) << cloud.viewpoint.x() << ' '
       << cloud.viewpoint.y() << ' ' << cloud.viewpoint.z() << "\n"
       << "element vertex " << cloud.points.size() << "\n"
       << "property double x\nproperty double y\nproperty double z\n"
       << "property double nx\nproperty double ny\nproperty double nz\n"
       << "property uchar risk\n"
       << "property double dose\n";
    if (with_color) {
        os << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    }
    os << "end_header\n";
    os << std::setprecision(17);
    for (const SurfacePoint& sp : cloud.points) {
        os << sp.position.x() << ' ' << sp.position.y() << ' ' << sp.position.z() << ' '
           << sp.normal.x() << ' ' << sp.normal.y() << ' ' << sp.normal.z() << ' '
           << (sp.risk == RiskClass::Hotspot ? 1 : 0) << ' ' << sp.dose;
        if (with_color) {
            const double t = max_dose > 0.0 ? std::clamp(sp.dose / max_dose, 0.0, 1.0) : 0.0;
            os << ' ' << static_cast<int>(std::lround(255.0 * t)) << ' ' << 0 << ' '
               << static_cast<int>(std::lround(255.0 * (1.0 - t)));
        }
        os << '\n';
    }
}

inline void write_ply(const std::string& path, const SurfaceCloud& cloud, bool with_color = false) {
    std::ofstream os(path);
    if (!os) {
        throw Error("cannot open for writing: " + path);
    }
    write_ply(os, cloud, with_color);
}

inline SurfaceCloud read_ply(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("ply", 0) != 0) {
        throw Error("not a PLY file");
    }
    SurfaceCloud cloud;
    std::size_t vertex_count = 0;
    std::vector<std::string> columns;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "end_header") {
            break;
        } else if (tok == "comment") {
            std::string kind;
            ls >> kind;
            if (kind == "viewpoint") {
                ls >> cloud.viewpoint.x() >> cloud.viewpoint.y() >> cloud.viewpoint.z();
            } else if (kind == "label") {
                std::string label;
                std::getline(ls, label);
                if (!label.empty() && label.front() == ' ') label.erase(0, 1);
                cloud.source_label = label == "unlabeled" ? "" : label;
            }
        } else if (tok == "element") {
            std::string name;
            ls >> name >> vertex_count;
            if (name != "vertex") {
                throw Error("unsupported PLY element: " + name);
            }
        } else if (tok == "property") {
            std::string type, name;
            ls >> type >> name;
            columns.push_back(name);
        }
    }
    cloud.points.resize(vertex_count);
    for (std::size_t i = 0; i < vertex_count; ++i) {
        if (!std::getline(is, line)) {
            throw Error("truncated PLY body");
        }
        std::istringstream ls(line);
        SurfacePoint& sp = cloud.points[i];
        for (const std::string& name : columns) {
            double v = 0.0;
            ls >> v;
            if (name == "x") sp.position.x() = v;
            else if (name == "y") sp.position.y() = v;
            else if (name == "z") sp.position.z() = v;
            else if (name == "nx") sp.normal.x() = v;
            else if (name == "ny") sp.normal.y() = v;
            else if (name == "nz") sp.normal.z() = v;
            else if (name == "risk") sp.risk = v != 0.0 ? RiskClass::Hotspot : RiskClass::NonHotspot;
            else if (name == "dose") sp.dose = v;
        }
    }
    return cloud;
}

inline SurfaceCloud read_ply(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw Error("cannot open: " + path);
    }
    return read_ply(is);
}

}  // namespace uvdose
