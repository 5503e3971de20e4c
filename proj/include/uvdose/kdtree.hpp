#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>
#include <vector>

#include "uvdose/geometry.hpp"

namespace uvdose {

/// Static 3-d tree over a point set, used for k-NN queries in surface
/// filtering, normal estimation, and probe snapping. Indices refer to the
/// vector passed at construction.
class KdTree3 {
public:
    explicit KdTree3(std::vector<Point3> points) : points_(std::move(points)) {
        order_.resize(points_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        if (!order_.empty()) {
            build(0, order_.size(), 0);
        }
    }

    std::size_t size() const { return points_.size(); }
    const std::vector<Point3>& points() const { return points_; }

    /// Indices of the k nearest points to `query`, closest first. When
    /// `exclude` is a valid index, that point is skipped (self-queries).
    std::vector<std::size_t> knn(const Point3& query, std::size_t k,
                                 std::size_t exclude = npos) const {
        Heap heap;
        if (!order_.empty() && k > 0) {
            search(0, order_.size(), 0, query, k, exclude, heap);
        }
        std::vector<std::size_t> result(heap.size());
        for (std::size_t i = heap.size(); i-- > 0;) {
            result[i] = heap.top().second;
            heap.pop();
        }
        return result;
    }

    std::pair<std::size_t, double> nearest(const Point3& query) const {
        const auto ids = knn(query, 1);
        if (ids.empty()) {
            return {npos, std::numeric_limits<double>::infinity()};
        }
        return {ids[0], (points_[ids[0]] - query).norm()};
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    using Entry = std::pair<double, std::size_t>;  // (squared distance, index)
    using Heap = std::priority_queue<Entry>;

    void build(std::size_t begin, std::size_t end, int depth) {
        if (end - begin <= 1) {
            return;
        }
        const std::size_t mid = begin + (end - begin) / 2;
        const int axis = depth % 3;
        std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                         order_.begin() + static_cast<std::ptrdiff_t>(mid),
                         order_.begin() + static_cast<std::ptrdiff_t>(end),
                         [&](std::size_t a, std::size_t b) {
                             if (points_[a][axis] != points_[b][axis]) {
                                 return points_[a][axis] < points_[b][axis];
                             }
                             return a < b;  // stable split for duplicate coordinates
                         });
        build(begin, mid, depth + 1);
        build(mid + 1, end, depth + 1);
    }

    void search(std::size_t begin, std::size_t end, int depth, const Point3& query,
                std::size_t k, std::size_t exclude, Heap& heap) const {
        if (begin >= end) {
            return;
        }
        const std::size_t mid = begin + (end - begin) / 2;
        const std::size_t idx = order_[mid];
        if (idx != exclude) {
            const double d2 = (points_[idx] - query).squaredNorm();
            if (heap.size() < k) {
                heap.emplace(d2, idx);
            } else if (d2 < heap.top().first ||
                       (d2 == heap.top().first && idx < heap.top().second)) {
                heap.pop();
                heap.emplace(d2, idx);
            }
        }
        const int axis = depth % 3;
        const double delta = query[axis] - points_[idx][axis];
        const auto [near_b, near_e, far_b, far_e] =
            delta < 0 ? std::tuple{begin, mid, mid + 1, end} : std::tuple{mid + 1, end, begin, mid};
        search(near_b, near_e, depth + 1, query, k, exclude, heap);
        if (heap.size() < k || delta * delta <= heap.top().first) {
            search(far_b, far_e, depth + 1, query, k, exclude, heap);
        }
    }

    std::vector<Point3> points_;
    std::vector<std::size_t> order_;
};

}  // namespace uvdose
