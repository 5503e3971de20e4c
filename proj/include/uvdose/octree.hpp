#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "uvdose/errors.hpp"
#include "uvdose/geometry.hpp"

namespace uvdose {

struct OctreeParams {
    double resolution = 0.02;  // m, leaf edge length
    double l_hit = 0.85;
    double l_miss = -0.4;
    double l_min = -2.0;
    double l_max = 3.5;
};

inline double log_odds_to_probability(double l) { return 1.0 - 1.0 / (1.0 + std::exp(l)); }

/// Probabilistic occupancy octree with per-leaf log-odds. The root cube is the
/// smallest power-of-two multiple of the resolution covering the requested
/// bounds; child extents are exactly half the parent per axis, and a point
/// maps to exactly one leaf at max depth. Leaves never touched are unknown.
class OccupancyOctree {
public:
    OccupancyOctree(const Point3& min_corner, const Point3& max_corner, OctreeParams params = {})
        : params_(params), min_corner_(min_corner), max_corner_(max_corner) {
        const double span = (max_corner - min_corner).maxCoeff();
        depth_ = 0;
        double size = params_.resolution;
        while (size < span) {
            size *= 2.0;
            ++depth_;
        }
        side_cells_ = std::int64_t{1} << depth_;
    }

    double resolution() const { return params_.resolution; }
    int max_depth() const { return depth_; }
    const OctreeParams& params() const { return params_; }

    /// Log-odds update along sensor rays: every leaf the ray traverses gets
    /// l_miss, the hit leaf gets l_hit, both clamped to [l_min, l_max].
    void integrate_scan(const Point3& origin, const std::vector<Point3>& hits) {
        check_bounds(origin);
        for (const Point3& hit : hits) {
            check_bounds(hit);
            const Key end = key_of(hit);
            for (const Key& k : ray_keys(origin, hit)) {
                if (k != end) {
                    update_leaf(k, params_.l_miss);
                }
            }
            update_leaf(end, params_.l_hit);
        }
    }

    std::optional<double> log_odds_at(const Point3& p) const {
        if (!inside(p)) {
            return std::nullopt;
        }
        const Node* node = root_.get();
        Key key = key_of(p);
        for (int level = depth_ - 1; node != nullptr && level >= 0; --level) {
            node = node->children[child_index(key, level)].get();
        }
        if (node == nullptr) {
            return std::nullopt;
        }
        return node->log_odds;
    }

    bool occupied_at(const Point3& p) const {
        const auto l = log_odds_at(p);
        return l.has_value() && log_odds_to_probability(*l) > 0.5;
    }

    Point3 leaf_center(const Point3& p) const { return center_of(key_of(p)); }

    void for_each_occupied(const std::function<void(const Point3&, double)>& fn) const {
        if (root_) {
            visit(root_.get(), Key{0, 0, 0}, depth_, fn);
        }
    }

    std::vector<Point3> occupied_leaf_centers() const {
        std::vector<Point3> centers;
        for_each_occupied([&](const Point3& c, double) { centers.push_back(c); });
        return centers;
    }

private:
    using Key = Eigen::Vector3i;

    struct Node {
        double log_odds = 0.0;
        std::array<std::unique_ptr<Node>, 8> children;
        bool is_leaf = false;
    };

    bool inside(const Point3& p) const {
        return (p.array() >= min_corner_.array()).all() &&
               (p.array() <= max_corner_.array()).all();
    }

    void check_bounds(const Point3& p) const {
        if (!inside(p)) {
            throw OutOfBounds("point outside octree bounds");
        }
    }

    Key key_of(const Point3& p) const {
        Key k;
        for (int a = 0; a < 3; ++a) {
            auto i = static_cast<std::int64_t>(std::floor((p[a] - min_corner_[a]) / params_.resolution));
            k[a] = static_cast<int>(std::clamp<std::int64_t>(i, 0, side_cells_ - 1));
        }
        return k;
    }

    Point3 center_of(const Key& k) const {
        return min_corner_ + (k.cast<double>() + Eigen::Vector3d::Constant(0.5)) * params_.resolution;
    }

    static int child_index(const Key& key, int level) {
        return ((key.x() >> level) & 1) | (((key.y() >> level) & 1) << 1) |
               (((key.z() >> level) & 1) << 2);
    }

    void update_leaf(const Key& key, double delta) {
        if (!root_) {
            root_ = std::make_unique<Node>();
        }
        Node* node = root_.get();
        for (int level = depth_ - 1; level >= 0; --level) {
            auto& child = node->children[child_index(key, level)];
            if (!child) {
                child = std::make_unique<Node>();
            }
            node = child.get();
        }
        node->is_leaf = true;
        node->log_odds = std::clamp(node->log_odds + delta, params_.l_min, params_.l_max);
    }

    // Amanatides & Woo voxel walk from origin to hit, inclusive of both ends.
    std::vector<Key> ray_keys(const Point3& origin, const Point3& hit) const {
        std::vector<Key> keys;
        Key cur = key_of(origin);
        const Key end = key_of(hit);
        keys.push_back(cur);
        if (cur == end) {
            return keys;
        }
        const Vec3 dir = hit - origin;
        Key step;
        Vec3 t_max, t_delta;
        for (int a = 0; a < 3; ++a) {
            if (dir[a] > 0.0) {
                step[a] = 1;
                const double boundary = min_corner_[a] + (cur[a] + 1) * params_.resolution;
                t_max[a] = (boundary - origin[a]) / dir[a];
                t_delta[a] = params_.resolution / dir[a];
            } else if (dir[a] < 0.0) {
                step[a] = -1;
                const double boundary = min_corner_[a] + cur[a] * params_.resolution;
                t_max[a] = (boundary - origin[a]) / dir[a];
                t_delta[a] = -params_.resolution / dir[a];
            } else {
                step[a] = 0;
                t_max[a] = std::numeric_limits<double>::infinity();
                t_delta[a] = std::numeric_limits<double>::infinity();
            }
        }
        const std::int64_t guard = 4 * (side_cells_ + 1) * 3;
        for (std::int64_t i = 0; i < guard && cur != end; ++i) {
            int axis = 0;
            if (t_max[1] < t_max[axis]) axis = 1;
            if (t_max[2] < t_max[axis]) axis = 2;
            cur[axis] += step[axis];
            t_max[axis] += t_delta[axis];
            keys.push_back(cur);
        }
        return keys;
    }

    void visit(const Node* node, Key prefix, int level,
               const std::function<void(const Point3&, double)>& fn) const {
        if (level == 0) {
            if (node->is_leaf && log_odds_to_probability(node->log_odds) > 0.5) {
                fn(center_of(prefix), node->log_odds);
            }
            return;
        }
        for (int c = 0; c < 8; ++c) {
            const Node* child = node->children[c].get();
            if (child != nullptr) {
                Key next = prefix;
                next.x() |= (c & 1) << (level - 1);
                next.y() |= ((c >> 1) & 1) << (level - 1);
                next.z() |= ((c >> 2) & 1) << (level - 1);
                visit(child, next, level - 1, fn);
            }
        }
    }

    OctreeParams params_;
    Point3 min_corner_;
    Point3 max_corner_;
    int depth_ = 0;
    std::int64_t side_cells_ = 1;
    std::unique_ptr<Node> root_;
};

}  // namespace uvdose
