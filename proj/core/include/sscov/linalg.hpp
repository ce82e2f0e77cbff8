#pragma once

// Dense symmetric linear algebra: storage type, the four matrix norms,
// Cholesky, Jacobi eigenvalues.

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sscov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Thrown when an operation that requires positive definiteness gets an
/// input that fails the Cholesky pivot test.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite() : std::runtime_error("matrix is not positive definite") {}
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

/// An iterative routine hit its iteration cap. `last_value` holds the last
/// iterate's scalar estimate.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_value)
        : std::runtime_error(what), last_value_(last_value) {}
    double last_value() const noexcept { return last_value_; }

private:
    double last_value_;
};

/// Dense p x p matrix whose entries are exactly symmetric.
class SymmetricMatrix {
public:
    /// p x p zero matrix, p >= 1.
    explicit SymmetricMatrix(Index dim);

    /// Throws std::invalid_argument unless `m` is square and bitwise symmetric.
    static SymmetricMatrix from_matrix(Matrix m);
    /// Copies the lower triangle of `m` onto the upper one.
    static SymmetricMatrix from_lower(Matrix m);
    static SymmetricMatrix identity(Index dim);
    static SymmetricMatrix diagonal(const Vector& diag);

    Index dim() const noexcept { return m_.rows(); }
    double operator()(Index i, Index j) const { return m_(i, j); }
    void set(Index i, Index j, double value) {
        m_(i, j) = value;
        m_(j, i) = value;
    }

    const Matrix& matrix() const noexcept { return m_; }
    operator const Matrix&() const noexcept { return m_; }  // NOLINT

    SymmetricMatrix operator*(double s) const;
    SymmetricMatrix operator+(const SymmetricMatrix& o) const;
    SymmetricMatrix operator-(const SymmetricMatrix& o) const;

private:
    SymmetricMatrix() = default;
    Matrix m_;
};

/// Lower-triangular factor L with positive diagonal, A = L L^T.
class CholeskyFactor {
public:
    explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}

    Index dim() const noexcept { return lower_.rows(); }
    const Matrix& lower() const noexcept { return lower_; }

    Matrix reconstruct() const;
    double log_det() const;
    /// Solves A x = b by forward then back substitution.
    Vector solve(const Vector& b) const;
    Matrix solve(const Matrix& b) const;

private:
    Matrix lower_;
};

double norm_elementwise_inf(const Matrix& a);
/// Maximum absolute column sum.
double norm_matrix_l1(const Matrix& a);
double norm_frobenius(const Matrix& a);
/// Largest singular value via power iteration on A^T A. Throws
/// ConvergenceError after `max_iter` iterations.
double norm_operator(const Matrix& a, double tol = 1e-9, int max_iter = 10000);

/// Returns std::nullopt when some pivot is <= 1e-12 * max diagonal.
std::optional<CholeskyFactor> cholesky(const SymmetricMatrix& a);
std::optional<double> log_det_spd(const SymmetricMatrix& a);
std::optional<SymmetricMatrix> invert_spd(const SymmetricMatrix& a);

/// All eigenvalues, descending, by cyclic Jacobi rotations. Stops when the
/// off-diagonal Frobenius mass drops below tol * ||A||_F.
std::vector<double> sym_eigenvalues(const SymmetricMatrix& a, double tol = 1e-12,
                                    int max_sweeps = 100);

inline double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

}  // namespace sscov
