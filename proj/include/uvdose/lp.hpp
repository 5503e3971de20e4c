#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "uvdose/errors.hpp"

namespace uvdose {

/// Dwell-time LP: minimize c.t subject to A t >= b and t >= lb.
/// Rows of A are surface points (dose per second delivered by each segment),
/// b the per-point minimum doses, lb the per-segment dwell floors.
struct LinearProgram {
    Eigen::VectorXd c;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd lb;

    Eigen::Index num_constraints() const { return A.rows(); }
    Eigen::Index num_variables() const { return A.cols(); }

    void check_dimensions() const {
        if (A.rows() != b.size() || A.cols() != c.size() || A.cols() != lb.size()) {
            throw DimensionMismatch("LP dimensions are inconsistent");
        }
        if (A.rows() == 0 || A.cols() == 0) {
            throw DimensionMismatch("LP must have at least one constraint and one variable");
        }
    }

    static LinearProgram min_total(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& lb) {
        LinearProgram lp;
        lp.A = A;
        lp.b = b;
        lp.lb = lb;
        lp.c = Eigen::VectorXd::Ones(A.cols());
        return lp;
    }
};

enum class LpStatus { Optimal, Infeasible, IterationLimit };

struct KktResiduals {
    double primal = 0.0;
    double dual = 0.0;
    double complementarity = 0.0;

    double max() const { return std::max({primal, dual, complementarity}); }
};

struct LpSolution {
    Eigen::VectorXd t;
    double objective = 0.0;
    LpStatus status = LpStatus::IterationLimit;
    KktResiduals kkt_residuals;
    int iterations = 0;
    // (primal objective, dual objective, primal residual, dual residual) per
    // iteration, recorded for the weak-duality property check
    std::vector<std::array<double, 4>> trace;
};

struct LpOptions {
    double tol = 1e-8;         // termination target for all three residuals
    double report_tol = 1e-6;  // residual level required to report Optimal
    int max_iter = 200;
    double step_scale = 0.9995;
};

/// Primal-dual path-following interior point with the Mehrotra
/// predictor-corrector step. Bounds are absorbed by x = t - lb, inequality
/// rows by slacks s: A x - s = b - A lb, x >= 0, s >= 0.
inline LpSolution solve(const LinearProgram& lp, const LpOptions& options = {}) {
    lp.check_dimensions();
    const Eigen::Index m = lp.num_constraints();
    const Eigen::Index n = lp.num_variables();

    const Eigen::VectorXd b_hat = lp.b - lp.A * lp.lb;
    const double shift_obj = lp.c.dot(lp.lb);

    LpSolution sol;
    sol.t = lp.lb;

    // a zero row can never reach a positive residual demand
    for (Eigen::Index i = 0; i < m; ++i) {
        if (lp.A.row(i).cwiseAbs().maxCoeff() == 0.0 && b_hat(i) > 0.0) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
    }

    Eigen::VectorXd x = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd z = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(m);
    Eigen::VectorXd s = (lp.A * x - b_hat).cwiseMax(1.0);

    const double b_scale = 1.0 + b_hat.cwiseAbs().maxCoeff();
    const double c_scale = 1.0 + lp.c.cwiseAbs().maxCoeff();

    double best_primal_res = std::numeric_limits<double>::infinity();
    int stagnant_iters = 0;

    const auto max_step = [](const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
        double alpha = 1.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            if (dv(i) < 0.0) {
                alpha = std::min(alpha, -v(i) / dv(i));
            }
        }
        return alpha;
    };

    for (int iter = 0; iter < options.max_iter; ++iter) {
        const Eigen::VectorXd r_p = b_hat - lp.A * x + s;
        const Eigen::VectorXd r_d = lp.c - lp.A.transpose() * y - z;
        const double mu = (x.dot(z) + s.dot(y)) / static_cast<double>(n + m);

        const double primal_obj = lp.c.dot(x) + shift_obj;
        const double dual_obj = b_hat.dot(y) + shift_obj;
        const double primal_res = r_p.cwiseAbs().maxCoeff() / b_scale;
        const double dual_res = r_d.cwiseAbs().maxCoeff() / c_scale;
        const double comp_res = mu / (1.0 + std::abs(primal_obj));
        sol.trace.push_back({primal_obj, dual_obj, primal_res, dual_res});
        sol.kkt_residuals = {primal_res, dual_res, comp_res};
        sol.iterations = iter;

        if (primal_res <= options.tol && dual_res <= options.tol && comp_res <= options.tol) {
            break;
        }

        // divergence / stagnation backstop
        if (std::abs(dual_obj) > 1e12) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        if (primal_res < best_primal_res * 0.9) {
            best_primal_res = primal_res;
            stagnant_iters = 0;
        } else if (primal_res > options.tol && ++stagnant_iters > 30) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }

        const Eigen::VectorXd dx_weight = z.cwiseQuotient(x);            // D_x
        const Eigen::VectorXd ds_weight_inv = y.cwiseQuotient(s);        // D_s^-1
        Eigen::MatrixXd normal = lp.A.transpose() * ds_weight_inv.asDiagonal() * lp.A;
        normal.diagonal() += dx_weight;
        Eigen::LDLT<Eigen::MatrixXd> factor(normal);

        const auto newton_step = [&](const Eigen::VectorXd& r_xz, const Eigen::VectorXd& r_sy,
                                     Eigen::VectorXd& dx, Eigen::VectorXd& dy, Eigen::VectorXd& dz,
                                     Eigen::VectorXd& ds) {
            const Eigen::VectorXd r2 = r_d - r_xz.cwiseQuotient(x);
            const Eigen::VectorXd r1 = r_p + r_sy.cwiseQuotient(y);
            dx = factor.solve(lp.A.transpose() * (ds_weight_inv.cwiseProduct(r1)) - r2);
            ds = lp.A * dx - r_p;
            dy = (r_sy - y.cwiseProduct(ds)).cwiseQuotient(s);
            dz = (r_xz - z.cwiseProduct(dx)).cwiseQuotient(x);
        };

        // predictor (affine scaling) step
        Eigen::VectorXd dx_aff, dy_aff, dz_aff, ds_aff;
        newton_step(-x.cwiseProduct(z), -s.cwiseProduct(y), dx_aff, dy_aff, dz_aff, ds_aff);

        const double alpha_p_aff = std::min(max_step(x, dx_aff), max_step(s, ds_aff));
        const double alpha_d_aff = std::min(max_step(z, dz_aff), max_step(y, dy_aff));
        const double mu_aff = ((x + alpha_p_aff * dx_aff).dot(z + alpha_d_aff * dz_aff) +
                               (s + alpha_p_aff * ds_aff).dot(y + alpha_d_aff * dy_aff)) /
                              static_cast<double>(n + m);
        const double sigma = std::pow(mu_aff / mu, 3.0);

        // corrector step
        Eigen::VectorXd dx, dy, dz, ds;
        const Eigen::VectorXd r_xz =
            Eigen::VectorXd::Constant(n, sigma * mu) - x.cwiseProduct(z) -
            dx_aff.cwiseProduct(dz_aff);
        const Eigen::VectorXd r_sy =
            Eigen::VectorXd::Constant(m, sigma * mu) - s.cwiseProduct(y) -
            ds_aff.cwiseProduct(dy_aff);
        newton_step(r_xz, r_sy, dx, dy, dz, ds);

        const double alpha_p = std::min(1.0, options.step_scale * std::min(max_step(x, dx),
                                                                           max_step(s, ds)));
        const double alpha_d = std::min(1.0, options.step_scale * std::min(max_step(z, dz),
                                                                           max_step(y, dy)));
        x += alpha_p * dx;
        s += alpha_p * ds;
        y += alpha_d * dy;
        z += alpha_d * dz;
    }

    sol.t = x + lp.lb;
    sol.objective = lp.c.dot(sol.t);
    sol.status = sol.kkt_residuals.max() <= options.report_tol ? LpStatus::Optimal
                                                               : LpStatus::IterationLimit;
    return sol;
}

// ---------------------------------------------------------------------------
// Plain-text LP exchange format: "n_rows n_cols", A row-major, b, lb.
// Objective coefficients are not serialized (unit dwell cost).

inline void write_lp(std::ostream& os, const LinearProgram& lp) {
    os << lp.A.rows() << ' ' << lp.A.cols() << '\n' << std::setprecision(17);
    for (Eigen::Index i = 0; i < lp.A.rows(); ++i) {
        for (Eigen::Index j = 0; j < lp.A.cols(); ++j) {
            os << lp.A(i, j) << (j + 1 < lp.A.cols() ? ' ' : '\n');
        }
    }
    for (Eigen::Index i = 0; i < lp.b.size(); ++i) {
        os << lp.b(i) << (i + 1 < lp.b.size() ? ' ' : '\n');
    }
    for (Eigen::Index i = 0; i < lp.lb.size(); ++i) {
        os << lp.lb(i) << (i + 1 < lp.lb.size() ? ' ' : '\n');
    }
}

inline LinearProgram read_lp(std::istream& is) {
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> rows >> cols) || rows <= 0 || cols <= 0) {
        throw Error("invalid LP header");
    }
    LinearProgram lp;
    lp.A.resize(rows, cols);
    lp.b.resize(rows);
    lp.lb.resize(cols);
    lp.c = Eigen::VectorXd::Ones(cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (!(is >> lp.A(i, j))) throw Error("truncated LP matrix");
        }
    }
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!(is >> lp.b(i))) throw Error("truncated LP rhs");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
        if (!(is >> lp.lb(j))) throw Error("truncated LP bounds");
    }
    return lp;
}

inline void write_lp(const std::string& path, const LinearProgram& lp) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    write_lp(os, lp);
}

inline LinearProgram read_lp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open: " + path);
    return read_lp(is);
}

}  // namespace uvdose
