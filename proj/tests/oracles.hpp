#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary.

#include "sscov/estimators.hpp"
#include "sscov/linalg.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace testing {

// min sum(x) over x = (b+, b-) >= 0 with |M (b+ - b-) - e_j|_inf <= lambda, by
// enumerating every choice of 2p active constraints among the 4p
// inequalities. The feasible set is pointed, so the optimum sits at one of
// these vertices. Returns +inf when nothing is feasible. Practical for p <= 3.
inline double clime_lp_oracle(const sscov::Matrix& m, sscov::Index j, double lambda) {
    using sscov::Index;
    using sscov::Matrix;
    using sscov::Vector;
    const Index p = m.rows();
    const Index nv = 2 * p;
    // all 4p constraints as rows of G x <= h
    Matrix g(4 * p, nv);
    Vector h(4 * p);
    g.setZero();
    for (Index i = 0; i < nv; ++i) {
        g(i, i) = -1.0;
        h(i) = 0.0;
    }
    for (Index i = 0; i < p; ++i) {
        const double e = (i == j) ? 1.0 : 0.0;
        for (Index k = 0; k < p; ++k) {
            g(nv + i, k) = m(i, k);
            g(nv + i, p + k) = -m(i, k);
            g(nv + p + i, k) = -m(i, k);
            g(nv + p + i, p + k) = m(i, k);
        }
        h(nv + i) = e + lambda;
        h(nv + p + i) = lambda - e;
    }
    const Index rows = 4 * p;
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> pick(static_cast<std::size_t>(rows), false);
    std::fill(pick.begin(), pick.begin() + nv, true);
    do {
        Matrix a(nv, nv);
        Vector b(nv);
        Index r = 0;
        for (Index i = 0; i < rows; ++i) {
            if (!pick[static_cast<std::size_t>(i)]) continue;
            a.row(r) = g.row(i);
            b(r) = h(i);
            ++r;
        }
        Eigen::FullPivLU<Matrix> lu(a);
        if (lu.rank() < nv) continue;
        const Vector x = lu.solve(b);
        if (((g * x - h).array() > 1e-9).any()) continue;
        best = std::min(best, x.sum());
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return best;
}

// Largest violation of the graphical-lasso optimality conditions
// M - V^{-1} + lambda * sign(V) = 0 (entries with v_ij != 0) and
// |M - V^{-1}| <= lambda (entries with v_ij = 0).
inline double glasso_kkt_residual(const sscov::SymmetricMatrix& m, const sscov::SymmetricMatrix& v,
                                  double lambda) {
    const auto w = sscov::invert_spd(v);
    if (!w) return std::numeric_limits<double>::infinity();
    const sscov::Matrix g = m.matrix() - w->matrix();
    double worst = 0.0;
    for (sscov::Index j = 0; j < g.cols(); ++j) {
        for (sscov::Index i = 0; i < g.rows(); ++i) {
            const double vij = v(i, j);
            const double r = vij != 0.0 ? std::abs(g(i, j) + lambda * (vij > 0 ? 1.0 : -1.0))
                                        : std::max(0.0, std::abs(g(i, j)) - lambda);
            worst = std::max(worst, r);
        }
    }
    return worst;
}

// tr(M V) - log det V + lambda * |V|_1; +inf off the PD cone.
inline double glasso_objective(const sscov::SymmetricMatrix& m, const sscov::Matrix& v, double lambda) {
    const auto s = sscov::SymmetricMatrix::from_lower(v);
    const auto ld = sscov::log_det_spd(s);
    if (!ld) return std::numeric_limits<double>::infinity();
    return (m.matrix().cwiseProduct(v)).sum() - *ld + lambda * v.cwiseAbs().sum();
}

// max_j |M beta_j - e_j|_inf over the unsymmetrized columns.
inline double clime_constraint_violation(const sscov::SymmetricMatrix& m, const sscov::Matrix& beta) {
    const auto p = m.dim();
    return (m.matrix() * beta - sscov::Matrix::Identity(p, p)).cwiseAbs().maxCoeff();
}

}  // namespace testing
