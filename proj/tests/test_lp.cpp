#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "uvdose/lp.hpp"
#include "uvdose/lp_oracle.hpp"

using namespace uvdose;

namespace {

LinearProgram make_lp(std::initializer_list<std::initializer_list<double>> rows,
                      std::initializer_list<double> b, std::initializer_list<double> lb) {
    LinearProgram lp;
    const auto m = static_cast<Eigen::Index>(rows.size());
    const auto n = static_cast<Eigen::Index>(rows.begin()->size());
    lp.A.resize(m, n);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) lp.A(i, j++) = v;
        ++i;
    }
    lp.b = Eigen::Map<const Eigen::VectorXd>(b.begin(), static_cast<Eigen::Index>(b.size()));
    lp.lb = Eigen::Map<const Eigen::VectorXd>(lb.begin(), static_cast<Eigen::Index>(lb.size()));
    lp.c = Eigen::VectorXd::Ones(n);
    return lp;
}

LinearProgram random_lp(std::mt19937& rng, int max_vars = 6, int max_cons = 10) {
    std::uniform_int_distribution<int> nd(1, max_vars), md(1, max_cons);
    std::uniform_real_distribution<double> a01(0.0, 1.0), brange(1.0, 10.0), lbr(0.0, 0.3);
    const int n = nd(rng), m = md(rng);
    LinearProgram lp;
    lp.A.resize(m, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) lp.A(i, j) = a01(rng);
        if (lp.A.row(i).maxCoeff() < 0.05) lp.A(i, 0) += 0.5;  // keep rows satisfiable
    }
    lp.b.resize(m);
    for (int i = 0; i < m; ++i) lp.b(i) = brange(rng);
    lp.lb.resize(n);
    for (int j = 0; j < n; ++j) lp.lb(j) = lbr(rng);
    lp.c = Eigen::VectorXd::Ones(n);
    return lp;
}

void check_certificate(const LinearProgram& lp, const LpSolution& sol) {
    REQUIRE(sol.status == LpStatus::Optimal);
    const double b_inf = lp.b.cwiseAbs().maxCoeff();
    REQUIRE(((lp.A * sol.t - lp.b).array() >= -1e-6 * b_inf).all());
    REQUIRE(((sol.t - lp.lb).array() >= -1e-9).all());
    REQUIRE(sol.kkt_residuals.primal <= 1e-6);
    REQUIRE(sol.kkt_residuals.dual <= 1e-6);
    REQUIRE(sol.kkt_residuals.complementarity <= 1e-6);
}

}  // namespace

TEST_CASE("single binding dose constraint", "[lp]") {
    const auto lp = make_lp({{1.0}}, {22.0}, {0.1});
    const auto sol = solve(lp);
    check_certificate(lp, sol);
    REQUIRE(sol.t(0) == Catch::Approx(22.0).epsilon(1e-7));
    REQUIRE(sol.objective == Catch::Approx(22.0).epsilon(1e-7));
}

TEST_CASE("dwell floor binds when the dose demand is tiny", "[lp]") {
    const auto lp = make_lp({{1.0}}, {0.05}, {0.1});
    const auto sol = solve(lp);
    check_certificate(lp, sol);
    REQUIRE(sol.t(0) == Catch::Approx(0.1).epsilon(1e-7));
}

TEST_CASE("two-segment dose split", "[lp]") {
    const auto lp = make_lp({{2.0, 1.0}, {0.0, 3.0}}, {22.0, 22.0}, {0.1, 0.1});
    const auto sol = solve(lp);
    check_certificate(lp, sol);
    REQUIRE(sol.t(0) == Catch::Approx(22.0 / 3.0).epsilon(1e-6));
    REQUIRE(sol.t(1) == Catch::Approx(22.0 / 3.0).epsilon(1e-6));
    REQUIRE(sol.objective == Catch::Approx(44.0 / 3.0).epsilon(1e-6));

    const auto oracle = vertex_oracle(lp);
    REQUIRE(oracle.status == LpStatus::Optimal);
    REQUIRE(oracle.objective == Catch::Approx(44.0 / 3.0).epsilon(1e-9));
    REQUIRE(std::abs(oracle.objective - sol.objective) < 1e-5 * sol.objective);
}

TEST_CASE("zero row with positive demand is infeasible", "[lp]") {
    const auto lp = make_lp({{1.0, 1.0}, {0.0, 0.0}}, {5.0, 5.0}, {0.0, 0.0});
    REQUIRE(solve(lp).status == LpStatus::Infeasible);
}

TEST_CASE("dimension mismatch is rejected before solving", "[lp]") {
    LinearProgram lp;
    lp.A.resize(2, 2);
    lp.A.setOnes();
    lp.b = Eigen::VectorXd::Ones(3);
    lp.lb = Eigen::VectorXd::Zero(2);
    lp.c = Eigen::VectorXd::Ones(2);
    REQUIRE_THROWS_AS(solve(lp), DimensionMismatch);
    REQUIRE_THROWS_AS(vertex_oracle(lp), DimensionMismatch);
}

TEST_CASE("vertex oracle reproduces the hand examples", "[lp]") {
    const auto lp1 = make_lp({{1.0}}, {22.0}, {0.1});
    REQUIRE(vertex_oracle(lp1).objective == Catch::Approx(22.0).margin(1e-9));
    const auto lp2 = make_lp({{1.0}}, {0.05}, {0.1});
    REQUIRE(vertex_oracle(lp2).objective == Catch::Approx(0.1).margin(1e-9));
}

TEST_CASE("vertex oracle rejects oversized problems", "[lp]") {
    LinearProgram lp;
    lp.A = Eigen::MatrixXd::Ones(3, 13);
    lp.b = Eigen::VectorXd::Ones(3);
    lp.lb = Eigen::VectorXd::Zero(13);
    lp.c = Eigen::VectorXd::Ones(13);
    REQUIRE_THROWS_AS(vertex_oracle(lp), TooLarge);
}

TEST_CASE("interior point matches the vertex oracle on random LPs", "[lp]") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const auto lp = random_lp(rng);
        const auto sol = solve(lp);
        const auto oracle = vertex_oracle(lp);
        INFO("trial " << trial << ": " << lp.A.rows() << "x" << lp.A.cols());
        REQUIRE(oracle.status == LpStatus::Optimal);
        check_certificate(lp, sol);
        REQUIRE(std::abs(sol.objective - oracle.objective) <=
                1e-5 * std::max(1.0, std::abs(oracle.objective)));
    }
}

TEST_CASE("duplicate constraints do not change the optimum", "[lp]") {
    const auto base = make_lp({{2.0, 1.0}, {0.0, 3.0}}, {22.0, 22.0}, {0.1, 0.1});
    const auto dup =
        make_lp({{2.0, 1.0}, {0.0, 3.0}, {2.0, 1.0}, {0.0, 3.0}}, {22.0, 22.0, 22.0, 22.0},
                {0.1, 0.1});
    const auto sol_base = solve(base);
    const auto sol_dup = solve(dup);
    REQUIRE(sol_dup.objective == Catch::Approx(sol_base.objective).epsilon(1e-6));
    REQUIRE(vertex_oracle(dup).objective ==
            Catch::Approx(vertex_oracle(base).objective).epsilon(1e-9));
}

TEST_CASE("weak duality holds along the central path", "[lp]") {
    std::mt19937 rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const auto lp = random_lp(rng);
        const auto sol = solve(lp);
        REQUIRE(sol.status == LpStatus::Optimal);
        for (const auto& record : sol.trace) {
            const auto [primal, dual, primal_res, dual_res] = record;
            if (primal_res <= 1e-9 && dual_res <= 1e-9) {
                REQUIRE(dual <= primal + 1e-7 * (1.0 + std::abs(primal)));
            }
        }
        // and at the end the gap is closed
        const auto& last = sol.trace.back();
        REQUIRE(std::abs(last[0] - last[1]) <= 1e-5 * (1.0 + std::abs(last[0])));
    }
}

TEST_CASE("optimal dwell scales linearly with the demand when lb = 0", "[lp]") {
    std::mt19937 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        auto lp = random_lp(rng);
        lp.lb.setZero();
        const auto sol1 = solve(lp);
        const double lambda = 3.7;
        LinearProgram scaled = lp;
        scaled.b *= lambda;
        const auto sol2 = solve(scaled);
        REQUIRE(sol1.status == LpStatus::Optimal);
        REQUIRE(sol2.status == LpStatus::Optimal);
        REQUIRE(sol2.objective ==
                Catch::Approx(lambda * sol1.objective).epsilon(1e-5).margin(1e-7));
    }
}

TEST_CASE("raising any demand never lowers the optimum", "[lp]") {
    std::mt19937 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        const auto lp = random_lp(rng);
        const auto before = solve(lp);
        LinearProgram bumped = lp;
        std::uniform_int_distribution<int> pick(0, static_cast<int>(lp.b.size()) - 1);
        bumped.b(pick(rng)) *= 1.5;
        const auto after = solve(bumped);
        REQUIRE(before.status == LpStatus::Optimal);
        REQUIRE(after.status == LpStatus::Optimal);
        REQUIRE(after.objective >= before.objective - 1e-6 * (1.0 + before.objective));
    }
}

TEST_CASE("LP text format round trips", "[lp]") {
    std::mt19937 rng(88);
    const auto lp = random_lp(rng);
    std::stringstream buffer;
    write_lp(buffer, lp);
    const auto loaded = read_lp(buffer);
    REQUIRE(loaded.A.rows() == lp.A.rows());
    REQUIRE(loaded.A.cols() == lp.A.cols());
    REQUIRE((loaded.A - lp.A).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((loaded.b - lp.b).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE((loaded.lb - lp.lb).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE(solve(loaded).objective == Catch::Approx(solve(lp).objective));
}
