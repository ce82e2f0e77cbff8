#pragma once

#include "sscov/linalg.hpp"
#include "sscov/random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <vector>

namespace testing {

using sscov::Index;
using sscov::Matrix;
using sscov::SymmetricMatrix;

inline Matrix random_matrix(Index rows, Index cols, sscov::Rng& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    return m;
}

// A^T A / p + shift * I.
inline SymmetricMatrix random_spd(Index p, sscov::Rng& rng, double shift = 1.0) {
    const Matrix a = random_matrix(p, p, rng);
    Matrix s = a.transpose() * a / static_cast<double>(p);
    s.diagonal().array() += shift;
    return SymmetricMatrix::from_lower(std::move(s));
}

inline SymmetricMatrix random_symmetric(Index p, sscov::Rng& rng) {
    return SymmetricMatrix::from_lower(random_matrix(p, p, rng));
}

inline Matrix permutation(Index p, sscov::Rng& rng) {
    std::vector<Index> idx(static_cast<std::size_t>(p));
    for (Index i = 0; i < p; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::shuffle(idx.begin(), idx.end(), rng.engine());
    Matrix m = Matrix::Zero(p, p);
    for (Index i = 0; i < p; ++i) m(i, idx[static_cast<std::size_t>(i)]) = 1.0;
    return m;
}

// Haar-ish orthogonal matrix from the QR of a Gaussian matrix.
inline Matrix random_rotation(Index p, sscov::Rng& rng) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(p, p, rng));
    return qr.householderQ() * Matrix::Identity(p, p);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace testing
