#pragma once

#include <Eigen/Dense>

#include <limits>
#include <vector>

#include "uvdose/errors.hpp"
#include "uvdose/lp.hpp"

namespace uvdose {

/// Reference optimum by enumerating every basic point formed from n active
/// constraints chosen among the m inequality rows and n lower bounds.
/// Exponential, test-only; capped at 12 variables / 20 constraints.
inline LpSolution vertex_oracle(const LinearProgram& lp) {
    lp.check_dimensions();
    const Eigen::Index m = lp.num_constraints();
    const Eigen::Index n = lp.num_variables();
    if (n > 12 || m > 20) {
        throw TooLarge("vertex oracle is capped at 12 variables and 20 constraints");
    }

    const double feas_tol =
        1e-8 * std::max({1.0, lp.b.cwiseAbs().maxCoeff(), lp.lb.cwiseAbs().maxCoeff()});

    LpSolution best;
    best.status = LpStatus::Infeasible;
    best.objective = std::numeric_limits<double>::infinity();

    const Eigen::Index total = m + n;
    std::vector<Eigen::Index> combo(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) combo[static_cast<std::size_t>(i)] = i;

    Eigen::MatrixXd basis(n, n);
    Eigen::VectorXd rhs(n);
    while (true) {
        for (Eigen::Index r = 0; r < n; ++r) {
            const Eigen::Index pick = combo[static_cast<std::size_t>(r)];
            if (pick < m) {
                basis.row(r) = lp.A.row(pick);
                rhs(r) = lp.b(pick);
            } else {
                basis.row(r).setZero();
                basis(r, pick - m) = 1.0;
                rhs(r) = lp.lb(pick - m);
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
        if (lu.isInvertible()) {
            const Eigen::VectorXd t = lu.solve(rhs);
            const bool feasible = ((lp.A * t - lp.b).array() >= -feas_tol).all() &&
                                  ((t - lp.lb).array() >= -feas_tol).all();
            if (feasible) {
                const double obj = lp.c.dot(t);
                if (obj < best.objective) {
                    best.objective = obj;
                    best.t = t;
                    best.status = LpStatus::Optimal;
                }
            }
        }

        // next combination of size n out of total
        Eigen::Index pos = n - 1;
        while (pos >= 0 && combo[static_cast<std::size_t>(pos)] == total - n + pos) {
            --pos;
        }
        if (pos < 0) break;
        ++combo[static_cast<std::size_t>(pos)];
        for (Eigen::Index r = pos + 1; r < n; ++r) {
            combo[static_cast<std::size_t>(r)] = combo[static_cast<std::size_t>(r - 1)] + 1;
        }
    }
    return best;
}

}  // namespace uvdose
