#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "uvdose/planner.hpp"

using namespace uvdose;

namespace {

GridMap open_room(int size = 40, double res = 0.05) { return GridMap::make(size, size, res); }

double tour_cost_by_astar(const GridMap& grid, const std::vector<HotspotSite>& sites,
                          const Eigen::Vector2i& start, const std::vector<std::size_t>& order) {
    double cost = astar(grid, start, sites[order[0]].stop_point).cost;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        cost += astar(grid, sites[order[i]].stop_point, sites[order[i + 1]].stop_point).cost;
    }
    return cost;
}

}  // namespace

TEST_CASE("registry classifies the seeded hotspot labels", "[planner]") {
    const auto registry = RiskRegistry::with_defaults();
    REQUIRE(registry.classify("side rail") == RiskClass::Hotspot);
    REQUIRE(registry.classify("Side_Rail") == RiskClass::Hotspot);
    REQUIRE(registry.classify("examination table") == RiskClass::Hotspot);
    REQUIRE(registry.classify("curtain") == RiskClass::NonHotspot);
    REQUIRE(registry.classify("plant") == RiskClass::NonHotspot);

    const auto risks = classify(registry, {"sink", "curtain", "door handle"});
    REQUIRE(risks == std::vector<RiskClass>{RiskClass::Hotspot, RiskClass::NonHotspot,
                                            RiskClass::Hotspot});
}

TEST_CASE("registry accepts JSON overrides", "[planner]") {
    const nlohmann::json config = {{"curtain", "hotspot"}, {"table", "nonhotspot"}};
    const auto registry = RiskRegistry::from_json(config);
    REQUIRE(registry.classify("curtain") == RiskClass::Hotspot);
    REQUIRE(registry.classify("table") == RiskClass::NonHotspot);
    REQUIRE(registry.classify("sink") == RiskClass::Hotspot);  // defaults kept
}

TEST_CASE("hotspot detection becomes a site with a free stop point", "[planner]") {
    const auto grid = open_room();
    const auto registry = RiskRegistry::with_defaults();
    std::vector<Detection> detections;
    detections.push_back({"armless office chair",
                          Eigen::AlignedBox2d(Eigen::Vector2d(0.9, 0.9), Eigen::Vector2d(1.1, 1.1))});
    const auto sites = mark_hotspots(grid, detections, registry);
    REQUIRE(sites.size() == 1);
    const auto& site = sites[0];
    REQUIRE(grid.free_at(site.stop_point.x(), site.stop_point.y()));
    const double d = (grid.cell_center(site.stop_point) - Eigen::Vector2d(1.0, 1.0)).norm();
    REQUIRE(d == Catch::Approx(0.6).margin(grid.resolution));
    REQUIRE_FALSE(site.footprint_cells.empty());
}

TEST_CASE("non-hotspot detections are filtered out", "[planner]") {
    const auto grid = open_room();
    const auto registry = RiskRegistry::with_defaults();
    std::vector<Detection> detections;
    detections.push_back({"curtain",
                          Eigen::AlignedBox2d(Eigen::Vector2d(0.9, 0.9), Eigen::Vector2d(1.1, 1.1))});
    REQUIRE(mark_hotspots(grid, detections, registry).empty());
}

TEST_CASE("stop point lands on the open side of a wall-adjacent footprint", "[planner]") {
    auto grid = open_room();
    // wall along x = 0..0.25 m (cells 0..4)
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < 5; ++x) grid.set(x, y, Cell::Occupied);
    // footprint hugging the wall
    const Eigen::AlignedBox2d footprint(Eigen::Vector2d(0.25, 0.9), Eigen::Vector2d(0.65, 1.3));
    const auto site = make_site(grid, 0, "sink", footprint, RiskClass::Hotspot);
    REQUIRE(grid.free_at(site.stop_point.x(), site.stop_point.y()));

    // brute-force oracle: best free candidate over the bearing ring
    const Eigen::Vector2d centroid = footprint.center();
    double best = std::numeric_limits<double>::infinity();
    Eigen::Vector2i expected(-1, -1);
    for (int k = 0; k < 16; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / 16;
        const Eigen::Vector2d cand = centroid + 0.6 * Eigen::Vector2d(std::cos(theta), std::sin(theta));
        const Eigen::Vector2i cell = grid.world_to_cell(cand.x(), cand.y());
        if (!grid.free_at(cell.x(), cell.y())) continue;
        const double d = (grid.cell_center(cell) - centroid).norm();
        if (d < best) {
            best = d;
            expected = cell;
        }
    }
    REQUIRE(site.stop_point == expected);
    REQUIRE(grid.cell_center(site.stop_point).x() > 0.25);  // never inside the wall
}

TEST_CASE("fully enclosed footprint raises NoFreeStopPoint", "[planner]") {
    auto grid = open_room();
    const Eigen::Vector2d centroid(1.0, 1.0);
    // occupy a thick ring covering the whole candidate circle
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) {
            const double d = (grid.cell_center({x, y}) - centroid).norm();
            if (d > 0.3 && d < 0.9) grid.set(x, y, Cell::Occupied);
        }
    }
    REQUIRE_THROWS_AS(make_site(grid, 0, "table",
                                Eigen::AlignedBox2d(Eigen::Vector2d(0.9, 0.9),
                                                    Eigen::Vector2d(1.1, 1.1)),
                                RiskClass::Hotspot),
                      NoFreeStopPoint);
}

TEST_CASE("single site order is trivial", "[planner]") {
    const auto grid = open_room();
    std::vector<HotspotSite> sites(1);
    sites[0].stop_point = {10, 10};
    REQUIRE(order_sites(grid, sites, {0, 0}) == std::vector<std::size_t>{0});
}

TEST_CASE("collinear sites keep their distance order", "[planner]") {
    const auto grid = open_room();
    std::vector<HotspotSite> sites(3);
    sites[0].stop_point = {5, 2};
    sites[1].stop_point = {15, 2};
    sites[2].stop_point = {25, 2};
    REQUIRE(order_sites(grid, sites, {0, 2}) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("tours stay within 5 percent of brute force on random boards", "[planner]") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> cell(1, 18);
    const auto grid = open_room(20);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<HotspotSite> sites(7);
        std::set<std::pair<int, int>> used;
        for (auto& s : sites) {
            int x = 0, y = 0;
            do {
                x = cell(rng);
                y = cell(rng);
            } while (!used.insert({x, y}).second);
            s.stop_point = {x, y};
        }
        const Eigen::Vector2i start(0, 0);
        const auto order = order_sites(grid, sites, start);

        std::vector<std::size_t> check = order;
        std::sort(check.begin(), check.end());
        REQUIRE(check == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});

        const double ours = tour_cost_by_astar(grid, sites, start, order);
        std::vector<std::size_t> perm(7);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        double best = std::numeric_limits<double>::infinity();
        do {
            best = std::min(best, tour_cost_by_astar(grid, sites, start, perm));
        } while (std::next_permutation(perm.begin(), perm.end()));
        INFO("trial " << trial);
        REQUIRE(ours <= 1.05 * best + 1e-9);
    }
}

TEST_CASE("2-opt improvement never increases the tour length", "[planner]") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 9;
        std::vector<Eigen::Vector2d> pts(n + 1);
        for (auto& p : pts) p = Eigen::Vector2d(u(rng), u(rng));
        Eigen::MatrixXd dist(n + 1, n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j <= n; ++j)
                dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    (pts[i] - pts[j]).norm();
        std::vector<std::size_t> tour(n);
        std::iota(tour.begin(), tour.end(), std::size_t{0});
        std::shuffle(tour.begin(), tour.end(), rng);
        const double before = detail::open_tour_cost(dist, tour);
        detail::two_opt_improve(dist, tour);
        REQUIRE(detail::open_tour_cost(dist, tour) <= before + 1e-12);
    }
}

TEST_CASE("large site counts fall back to the 2-opt heuristic", "[planner]") {
    const auto grid = open_room(40);
    std::vector<HotspotSite> sites(14);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> cell(1, 38);
    std::set<std::pair<int, int>> used;
    for (auto& s : sites) {
        int x = 0, y = 0;
        do {
            x = cell(rng);
            y = cell(rng);
        } while (!used.insert({x, y}).second);
        s.stop_point = {x, y};
    }
    const auto order = order_sites(grid, sites, {0, 0});
    std::vector<std::size_t> check = order;
    std::sort(check.begin(), check.end());
    std::vector<std::size_t> expect(14);
    std::iota(expect.begin(), expect.end(), std::size_t{0});
    REQUIRE(check == expect);
}

TEST_CASE("walled-off site raises UnreachableSite", "[planner]") {
    auto grid = open_room(20);
    for (int x = 0; x < 20; ++x) grid.set(x, 10, Cell::Occupied);
    std::vector<HotspotSite> sites(2);
    sites[0].stop_point = {5, 5};
    sites[1].stop_point = {5, 15};  // behind the wall
    REQUIRE_THROWS_AS(order_sites(grid, sites, {0, 0}), UnreachableSite);
}

TEST_CASE("PGM map import reads both ascii and binary", "[planner]") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "uvdose_map_test";
    fs::create_directories(dir);

    {
        std::ofstream yaml(dir / "map.yaml");
        yaml << "image: map.pgm\nresolution: 0.1\norigin: [-1.0, -2.0, 0.0]\n";
    }
    {
        std::ofstream pgm(dir / "map.pgm");
        pgm << "P2\n# test map\n4 3\n255\n";
        // row 0 (top of image): all free; row 1: one wall pixel; row 2: unknown
        pgm << "254 254 254 254\n";
        pgm << "254 0 254 254\n";
        pgm << "205 205 205 205\n";
    }
    const auto grid = read_pgm_map((dir / "map.pgm").string(), (dir / "map.yaml").string());
    REQUIRE(grid.width == 4);
    REQUIRE(grid.height == 3);
    REQUIRE(grid.resolution == Catch::Approx(0.1));
    REQUIRE(grid.origin.x() == Catch::Approx(-1.0));
    REQUIRE(grid.at(0, 0) == Cell::Unknown);   // bottom row = last image row
    REQUIRE(grid.at(1, 1) == Cell::Occupied);  // wall pixel
    REQUIRE(grid.at(0, 2) == Cell::Free);      // top image row

    {
        std::ofstream pgm(dir / "map5.pgm", std::ios::binary);
        pgm << "P5\n2 2\n255\n";
        const unsigned char data[4] = {254, 0, 205, 254};
        pgm.write(reinterpret_cast<const char*>(data), 4);
    }
    const auto grid5 = read_pgm_map((dir / "map5.pgm").string(), (dir / "map.yaml").string());
    REQUIRE(grid5.at(0, 1) == Cell::Free);
    REQUIRE(grid5.at(1, 1) == Cell::Occupied);
    REQUIRE(grid5.at(0, 0) == Cell::Unknown);
    REQUIRE(grid5.at(1, 0) == Cell::Free);
}
