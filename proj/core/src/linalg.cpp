#include "sscov/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sscov {

SymmetricMatrix::SymmetricMatrix(Index dim) {
    if (dim < 1) {
        throw std::invalid_argument("SymmetricMatrix: dim must be >= 1, got " +
                                    std::to_string(dim));
    }
    m_ = Matrix::Zero(dim, dim);
}

SymmetricMatrix SymmetricMatrix::from_matrix(Matrix m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw std::invalid_argument("SymmetricMatrix: matrix must be square and nonempty");
    }
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = j + 1; i < m.rows(); ++i) {
            if (m(i, j) != m(j, i)) {
                throw std::invalid_argument("SymmetricMatrix: entries (" + std::to_string(i) +
                                            "," + std::to_string(j) + ") are not symmetric");
            }
        }
    }
    SymmetricMatrix s;
    s.m_ = std::move(m);
    return s;
}

SymmetricMatrix SymmetricMatrix::from_lower(Matrix m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
        throw std::invalid_argument("SymmetricMatrix: matrix must be square and nonempty");
    }
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = j + 1; i < m.rows(); ++i) m(j, i) = m(i, j);
    }
    SymmetricMatrix s;
    s.m_ = std::move(m);
    return s;
}

SymmetricMatrix SymmetricMatrix::identity(Index dim) {
    SymmetricMatrix s(dim);
    s.m_.diagonal().setOnes();
    return s;
}

SymmetricMatrix SymmetricMatrix::diagonal(const Vector& diag) {
    SymmetricMatrix s(diag.size());
    s.m_.diagonal() = diag;
    return s;
}

SymmetricMatrix SymmetricMatrix::operator*(double s) const {
    SymmetricMatrix out;
    out.m_ = m_ * s;
    return out;
}

SymmetricMatrix SymmetricMatrix::operator+(const SymmetricMatrix& o) const {
    SymmetricMatrix out;
    out.m_ = m_ + o.m_;
    return out;
}

SymmetricMatrix SymmetricMatrix::operator-(const SymmetricMatrix& o) const {
    SymmetricMatrix out;
    out.m_ = m_ - o.m_;
    return out;
}

Matrix CholeskyFactor::reconstruct() const { return lower_ * lower_.transpose(); }

double CholeskyFactor::log_det() const {
    double s = 0.0;
    for (Index i = 0; i < lower_.rows(); ++i) s += std::log(lower_(i, i));
    return 2.0 * s;
}

Vector CholeskyFactor::solve(const Vector& b) const {
    Matrix bm = b;
    return solve(bm).col(0);
}

Matrix CholeskyFactor::solve(const Matrix& b) const {
    const Index p = lower_.rows();
    Matrix x = b;
    // forward: L y = b
    for (Index c = 0; c < x.cols(); ++c) {
        for (Index i = 0; i < p; ++i) {
            double s = x(i, c);
            for (Index k = 0; k < i; ++k) s -= lower_(i, k) * x(k, c);
            x(i, c) = s / lower_(i, i);
        }
        // back: L^T x = y
        for (Index i = p - 1; i >= 0; --i) {
            double s = x(i, c);
            for (Index k = i + 1; k < p; ++k) s -= lower_(k, i) * x(k, c);
            x(i, c) = s / lower_(i, i);
        }
    }
    return x;
}

double norm_elementwise_inf(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double norm_matrix_l1(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

double norm_frobenius(const Matrix& a) { return std::sqrt(a.cwiseAbs2().sum()); }

double norm_operator(const Matrix& a, double tol, int max_iter) {
    if (a.rows() != a.cols()) throw std::invalid_argument("norm_operator: matrix must be square");
    const Index p = a.rows();
    if (p == 0 || a.cwiseAbs().maxCoeff() == 0.0) return 0.0;

    const Matrix ata = a.transpose() * a;
    // Unequal entries keep the start vector off any coordinate-aligned
    // invariant subspace.
    Vector v(p);
    for (Index i = 0; i < p; ++i) v(i) = 1.0 + 0.1 * static_cast<double>(i + 1) / static_cast<double>(p);
    v.normalize();

    double value = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        Vector w = ata * v;
        const double next = v.dot(w);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        if (it > 0 && std::abs(next - value) <= tol * std::abs(next)) {
            return std::sqrt(std::max(next, 0.0));
        }
        value = next;
    }
    throw ConvergenceError("norm_operator: power iteration did not converge",
                           std::sqrt(std::max(value, 0.0)));
}

std::optional<CholeskyFactor> cholesky(const SymmetricMatrix& a) {
    const Index p = a.dim();
    const Matrix& m = a.matrix();
    const double max_diag = m.diagonal().maxCoeff();
    if (!(max_diag > 0.0)) return std::nullopt;
    const double pivot_floor = 1e-12 * max_diag;

    Matrix l = Matrix::Zero(p, p);
    for (Index j = 0; j < p; ++j) {
        double d = m(j, j);
        for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > pivot_floor)) return std::nullopt;
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (Index i = j + 1; i < p; ++i) {
            double s = m(i, j);
            for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return CholeskyFactor(std::move(l));
}

std::optional<double> log_det_spd(const SymmetricMatrix& a) {
    auto f = cholesky(a);
    if (!f) return std::nullopt;
    return f->log_det();
}

std::optional<SymmetricMatrix> invert_spd(const SymmetricMatrix& a) {
    auto f = cholesky(a);
    if (!f) return std::nullopt;
    const Matrix eye = Matrix::Identity(a.dim(), a.dim());
    Matrix inv = f->solve(eye);
    // average the two triangles so the result is exactly symmetric
    Matrix sym = 0.5 * (inv + inv.transpose());
    return SymmetricMatrix::from_lower(std::move(sym));
}

std::vector<double> sym_eigenvalues(const SymmetricMatrix& a, double tol, int max_sweeps) {
    const Index p = a.dim();
    Matrix m = a.matrix();
    const double scale = norm_frobenius(m);

    auto off_norm = [&] {
        double s = 0.0;
        for (Index j = 0; j < p; ++j)
            for (Index i = 0; i < p; ++i)
                if (i != j) s += m(i, j) * m(i, j);
        return std::sqrt(s);
    };

    bool done = off_norm() <= tol * scale;
    for (int sweep = 0; sweep < max_sweeps && !done; ++sweep) {
        for (Index q = 0; q < p - 1; ++q) {
            for (Index r = q + 1; r < p; ++r) {
                const double apq = m(q, r);
                if (apq == 0.0) continue;
                const double theta = (m(r, r) - m(q, q)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Index k = 0; k < p; ++k) {
                    const double mkq = m(k, q);
                    const double mkr = m(k, r);
                    m(k, q) = c * mkq - s * mkr;
                    m(k, r) = s * mkq + c * mkr;
                }
                for (Index k = 0; k < p; ++k) {
                    const double mqk = m(q, k);
                    const double mrk = m(r, k);
                    m(q, k) = c * mqk - s * mrk;
                    m(r, k) = s * mqk + c * mrk;
                }
                m(q, r) = 0.0;
                m(r, q) = 0.0;
            }
        }
        done = off_norm() <= tol * scale;
    }
    if (!done) {
        throw ConvergenceError("sym_eigenvalues: Jacobi sweeps did not converge", off_norm());
    }
    std::vector<double> ev(static_cast<std::size_t>(p));
    for (Index i = 0; i < p; ++i) ev[static_cast<std::size_t>(i)] = m(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

}  // namespace sscov
