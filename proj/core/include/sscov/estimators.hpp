#pragma once

// Sparse precision-matrix estimators. The CLIME-type solver and the graphical
// lasso both take a plug-in matrix M: p * SSCM for the spatial-sign variants
// (SCLIME, SGLASSO) or the sample covariance for the classical ones (CLIME,
// GLASSO). Only the method tag differs.

#include "sscov/linalg.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sscov {

enum class Method { SCLIME, SGLASSO, CLIME, GLASSO };

std::string to_string(Method m);
/// Case-insensitive; throws std::invalid_argument on unknown names.
Method parse_method(const std::string& name);
bool is_spatial(Method m) noexcept;
bool is_clime_type(Method m) noexcept;

struct SolverConfig {
    double tol_primal = 1e-5;
    double tol_dual = 1e-5;
    /// Sweep cap for the graphical lasso and ADMM; pivot cap per column and
    /// lambda for the simplex.
    int max_iter = 5000;
    /// ADMM penalty rho.
    double admm_step = 1.0;
    /// Coordinate-descent stopping threshold inside each graphical-lasso
    /// column update.
    double inner_tol = 1e-7;

    /// Throws std::invalid_argument if any field is out of range.
    void validate() const;
};

struct PrecisionEstimate {
    SymmetricMatrix matrix;
    Method method;
    double lambda;
    bool converged;
    bool is_pd;
    int iterations = 0;
};

/// Column-wise CLIME solution: beta holds the unsymmetrized columns.
/// A column is unconverged when its LP is infeasible at this lambda or the
/// pivot cap was hit; on a path it then keeps the last feasible solution.
struct ClimeColumns {
    Matrix beta;
    std::vector<bool> column_converged;
    int iterations = 0;

    bool converged() const;
};

/// For each column j: min |b|_1 s.t. |M b - e_j|_inf <= lambda, solved
/// exactly by dual simplex from the all-slack basis.
ClimeColumns clime_columns(const SymmetricMatrix& m, double lambda, const SolverConfig& cfg);

/// Same LPs along a path. Lambdas must be sorted in decreasing order; each
/// column's basis carries over from one lambda to the next, so only the
/// pivots needed to restore feasibility are paid.
std::vector<ClimeColumns> clime_path(const SymmetricMatrix& m, std::span<const double> lambdas,
                                     const SolverConfig& cfg);

/// Linearized ADMM for the same column problems, mu = 1.01 * |M|_op^2.
/// Slow to reach tight residuals; kept as an independent cross-check.
ClimeColumns clime_columns_admm(const SymmetricMatrix& m, double lambda, const SolverConfig& cfg);

/// Keeps, for each pair (i, j), whichever of v1_ij and v1_ji has the smaller
/// magnitude. Ties keep the upper-triangle entry.
SymmetricMatrix symmetrize_min(const Matrix& v1);

/// CLIME-type estimate (SCLIME when M = p * SSCM): column solve, then
/// symmetrize_min.
PrecisionEstimate sclime(const SymmetricMatrix& m, double lambda, const SolverConfig& cfg,
                         Method tag = Method::SCLIME);

/// Graphical-lasso state: W is the covariance-side iterate, column j of B
/// holds the lasso coefficients of column j (B(j, j) unused).
struct GlassoState {
    Matrix w;
    Matrix b;
    int sweeps = 0;
    bool converged = false;
};

/// argmin_{V > 0} tr(M V) - log det V + lambda * |V|_1 (diagonal penalized)
/// by block coordinate descent on W = V^{-1}.
GlassoState glasso_solve(const SymmetricMatrix& m, double lambda, const SolverConfig& cfg,
                         const GlassoState* warm = nullptr);
/// Recovers the precision matrix from a solved state.
SymmetricMatrix glasso_precision(const GlassoState& state);

PrecisionEstimate sglasso(const SymmetricMatrix& m, double lambda, const SolverConfig& cfg,
                          Method tag = Method::SGLASSO);

/// Dispatches on the method family.
PrecisionEstimate estimate(Method method, const SymmetricMatrix& m, double lambda,
                           const SolverConfig& cfg);

/// One estimate per lambda, returned in the order given. Solves run from the
/// largest lambda down; with warm_start each solve starts from the previous.
std::vector<PrecisionEstimate> fit_path(Method method, const SymmetricMatrix& m,
                                        std::span<const double> lambdas, const SolverConfig& cfg,
                                        bool warm_start = true);

/// Zeroes entries with |v_ij| < tau.
SymmetricMatrix threshold_estimate(const SymmetricMatrix& v, double tau);

struct SignSupport {
    /// sgn(v_ij) in {-1, 0, 1}.
    Eigen::MatrixXi signs;
    /// {(i, j) : v_ij != 0}, diagonal included, column-major order.
    std::vector<std::pair<Index, Index>> support;
    /// min |v_ij| over the support; empty for the zero matrix.
    std::optional<double> theta_min;
};

SignSupport sign_support(const SymmetricMatrix& v);

}  // namespace sscov
