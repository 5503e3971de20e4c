#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>
#include <vector>

#include "uvdose/errors.hpp"
#include "uvdose/grid_map.hpp"

namespace uvdose {

struct GridPath {
    std::vector<Eigen::Vector2i> cells;  // from start to goal inclusive
    double cost = 0.0;                   // unit cardinal steps, sqrt(2) diagonals
};

namespace detail {

inline double octile(const Eigen::Vector2i& a, const Eigen::Vector2i& b) {
    const double dx = std::abs(a.x() - b.x());
    const double dy = std::abs(a.y() - b.y());
    return std::max(dx, dy) + (std::numbers::sqrt2 - 1.0) * std::min(dx, dy);
}

}  // namespace detail

/// 8-connected A* with the octile heuristic; diagonal steps are blocked when
/// either adjacent cardinal cell is not free (no corner cutting). Ties break
/// deterministically on (f, h, cell index).
inline GridPath astar(const GridMap& grid, const Eigen::Vector2i& from,
                      const Eigen::Vector2i& to) {
    if (!grid.free_at(from.x(), from.y()) || !grid.free_at(to.x(), to.y())) {
        throw NoPath("start or goal cell is not free");
    }
    const auto index = [&](const Eigen::Vector2i& c) {
        return static_cast<std::size_t>(c.y()) * static_cast<std::size_t>(grid.width) +
               static_cast<std::size_t>(c.x());
    };
    const std::size_t total = static_cast<std::size_t>(grid.width) * grid.height;
    std::vector<double> g(total, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> parent(total, total);
    std::vector<bool> closed(total, false);

    using Entry = std::tuple<double, double, std::size_t>;  // (f, h, index)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

    g[index(from)] = 0.0;
    open.emplace(detail::octile(from, to), detail::octile(from, to), index(from));

    static constexpr int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
    static constexpr int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};

    while (!open.empty()) {
        const auto [f, h, idx] = open.top();
        open.pop();
        if (closed[idx]) continue;
        closed[idx] = true;
        const Eigen::Vector2i cell(static_cast<int>(idx % grid.width),
                                   static_cast<int>(idx / grid.width));
        if (cell == to) {
            GridPath path;
            path.cost = g[idx];
            for (std::size_t walk = idx; walk != total; walk = parent[walk]) {
                path.cells.emplace_back(static_cast<int>(walk % grid.width),
                                        static_cast<int>(walk / grid.width));
            }
            std::reverse(path.cells.begin(), path.cells.end());
            return path;
        }
        for (int k = 0; k < 8; ++k) {
            const int nx = cell.x() + dxs[k];
            const int ny = cell.y() + dys[k];
            if (!grid.free_at(nx, ny)) continue;
            const bool diagonal = dxs[k] != 0 && dys[k] != 0;
            if (diagonal && (!grid.free_at(cell.x() + dxs[k], cell.y()) ||
                             !grid.free_at(cell.x(), cell.y() + dys[k]))) {
                continue;
            }
            const double step = diagonal ? std::numbers::sqrt2 : 1.0;
            const std::size_t nidx = index({nx, ny});
            if (closed[nidx]) continue;
            const double candidate = g[idx] + step;
            if (candidate < g[nidx]) {
                g[nidx] = candidate;
                parent[nidx] = idx;
                const double nh = detail::octile({nx, ny}, to);
                open.emplace(candidate + nh, nh, nidx);
            }
        }
    }
    throw NoPath("no path between the requested cells");
}

}  // namespace uvdose
