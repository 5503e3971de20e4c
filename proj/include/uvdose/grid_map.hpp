#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "uvdose/errors.hpp"
#include "uvdose/geometry.hpp"

namespace uvdose {

enum class Cell : std::uint8_t { Free = 0, Occupied = 1, Unknown = 2 };

/// 2D chassis occupancy grid. Cells are row-major with (0,0) at the map
/// origin corner; cell (x,y) covers origin + [x,x+1) x [y,y+1) * resolution.
struct GridMap {
    int width = 0;
    int height = 0;
    double resolution = 0.05;  // m per cell
    Point3 origin{0, 0, 0};    // world position of the (0,0) cell corner
    std::vector<Cell> cells;

    static GridMap make(int width, int height, double resolution,
                        const Point3& origin = Point3(0, 0, 0), Cell fill = Cell::Free) {
        GridMap g;
        g.width = width;
        g.height = height;
        g.resolution = resolution;
        g.origin = origin;
        g.cells.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
        return g;
    }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    Cell at(int x, int y) const {
        return cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                     static_cast<std::size_t>(x)];
    }

    void set(int x, int y, Cell value) {
        cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
              static_cast<std::size_t>(x)] = value;
    }

    bool free_at(int x, int y) const { return in_bounds(x, y) && at(x, y) == Cell::Free; }

    Eigen::Vector2i world_to_cell(double wx, double wy) const {
        return {static_cast<int>(std::floor((wx - origin.x()) / resolution)),
                static_cast<int>(std::floor((wy - origin.y()) / resolution))};
    }

    Eigen::Vector2d cell_center(const Eigen::Vector2i& cell) const {
        return {origin.x() + (cell.x() + 0.5) * resolution,
                origin.y() + (cell.y() + 0.5) * resolution};
    }
};

namespace detail {

inline int next_pgm_value(std::istream& is) {
    // skips whitespace and # comments in a PGM header
    while (true) {
        const int c = is.peek();
        if (c == '#') {
            std::string line;
            std::getline(is, line);
        } else if (std::isspace(c)) {
            is.get();
        } else {
            break;
        }
    }
    int value = 0;
    if (!(is >> value)) {
        throw Error("malformed PGM header");
    }
    return value;
}

}  // namespace detail

struct MapLoadParams {
    double occupied_thresh = 0.65;
    double free_thresh = 0.196;
    bool negate = false;
};

/// Import a PGM (P2 or P5) occupancy image with its YAML-style sidecar
/// (resolution, origin: [x, y, yaw], optional thresholds/negate). Uses the
/// usual convention: darker pixels are more occupied; grid row 0 is the
/// bottom of the image.
inline GridMap read_pgm_map(const std::string& pgm_path, const std::string& yaml_path) {
    double resolution = 0.05;
    Point3 origin(0, 0, 0);
    MapLoadParams params;

    std::ifstream yaml(yaml_path);
    if (!yaml) {
        throw Error("cannot open map sidecar: " + yaml_path);
    }
    std::string line;
    while (std::getline(yaml, line)) {
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 1);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        if (key == "resolution") {
            resolution = std::stod(value);
        } else if (key == "origin") {
            for (char& ch : value) {
                if (ch == '[' || ch == ']' || ch == ',') ch = ' ';
            }
            std::istringstream vs(value);
            double x = 0, y = 0;
            vs >> x >> y;
            origin = Point3(x, y, 0);
        } else if (key == "occupied_thresh") {
            params.occupied_thresh = std::stod(value);
        } else if (key == "free_thresh") {
            params.free_thresh = std::stod(value);
        } else if (key == "negate") {
            std::istringstream vs(value);
            int flag = 0;
            vs >> flag;
            params.negate = flag != 0;
        }
    }

    std::ifstream pgm(pgm_path, std::ios::binary);
    if (!pgm) {
        throw Error("cannot open map image: " + pgm_path);
    }
    std::string magic;
    pgm >> magic;
    if (magic != "P2" && magic != "P5") {
        throw Error("unsupported PGM magic: " + magic);
    }
    const int width = detail::next_pgm_value(pgm);
    const int height = detail::next_pgm_value(pgm);
    const int maxval = detail::next_pgm_value(pgm);
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 255) {
        throw Error("unsupported PGM dimensions");
    }

    std::vector<int> pixels(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    if (magic == "P2") {
        for (auto& p : pixels) {
            if (!(pgm >> p)) throw Error("truncated PGM data");
        }
    } else {
        pgm.get();  // single whitespace after maxval
        for (auto& p : pixels) {
            const int c = pgm.get();
            if (c == EOF) throw Error("truncated PGM data");
            p = c;
        }
    }

    GridMap grid = GridMap::make(width, height, resolution, origin);
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            const int v = pixels[static_cast<std::size_t>(row) * width + col];
            const double shade = static_cast<double>(v) / maxval;
            const double occ = params.negate ? shade : 1.0 - shade;
            Cell cell = Cell::Unknown;
            if (occ > params.occupied_thresh) {
                cell = Cell::Occupied;
            } else if (occ < params.free_thresh) {
                cell = Cell::Free;
            }
            grid.set(col, height - 1 - row, cell);  // image row 0 is the top
        }
    }
    return grid;
}

}  // namespace uvdose
