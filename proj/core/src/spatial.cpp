#include "sscov/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sscov {

namespace {

constexpr double kCoincide = 1e-12;

Vector coordinate_median(const Dataset& data) {
    const Index n = data.rows();
    Vector med(data.cols());
    std::vector<double> col(static_cast<std::size_t>(n));
    for (Index j = 0; j < data.cols(); ++j) {
        for (Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = data(i, j);
        std::sort(col.begin(), col.end());
        const auto h = static_cast<std::size_t>(n / 2);
        med(j) = (n % 2 == 1) ? col[h] : 0.5 * (col[h - 1] + col[h]);
    }
    return med;
}

// Rows as unit sign vectors about `center`; rows equal to it become zero.
Matrix sign_rows(const Dataset& data, const Vector& center) {
    Matrix u = data.rowwise() - center.transpose();
    for (Index i = 0; i < u.rows(); ++i) {
        const double norm = u.row(i).norm();
        if (norm > 0.0)
            u.row(i) /= norm;
        else
            u.row(i).setZero();
    }
    return u;
}

}  // namespace

Vector sign_vector(const Vector& x) {
    const double norm = x.norm();
    if (norm > 0.0) return x / norm;
    return Vector::Zero(x.size());
}

double spatial_median_objective(const Dataset& data, const Vector& mu) {
    return (data.rowwise() - mu.transpose()).rowwise().norm().sum();
}

SpatialMedian spatial_median(const Dataset& data, double tol, int max_iter) {
    const Index n = data.rows();
    const Index p = data.cols();
    if (n < 1) throw std::invalid_argument("spatial_median: need at least one row");

    SpatialMedian out;
    Vector y = coordinate_median(data);
    Vector weighted(p);
    Vector pull(p);
    for (int it = 1; it <= max_iter; ++it) {
        double weight_sum = 0.0;
        int coincident = 0;
        weighted.setZero();
        pull.setZero();
        for (Index i = 0; i < n; ++i) {
            const Vector diff = data.row(i).transpose() - y;
            const double d = diff.norm();
            if (d <= kCoincide) {
                ++coincident;
                continue;
            }
            const double w = 1.0 / d;
            weight_sum += w;
            weighted.noalias() += w * data.row(i).transpose();
            pull.noalias() += w * diff;
        }
        if (weight_sum == 0.0) {  // every point sits on y
            out.iterations = it;
            out.converged = true;
            break;
        }
        const Vector t = weighted / weight_sum;
        Vector next;
        if (coincident == 0) {
            next = t;
        } else {
            // Vardi-Zhang: the coinciding mass resists the pull of the rest.
            const double r = pull.norm();
            const double ratio = r > 0.0 ? static_cast<double>(coincident) / r
                                         : std::numeric_limits<double>::infinity();
            const double keep = std::min(1.0, ratio);
            next = (1.0 - keep) * t + keep * y;
        }
        const double step = (next - y).norm();
        y = std::move(next);
        out.iterations = it;
        if (step < tol * (1.0 + y.norm())) {
            out.converged = true;
            break;
        }
    }
    out.median = std::move(y);
    return out;
}

SymmetricMatrix sscm(const Dataset& data, const Vector& center) {
    if (data.rows() < 1) throw std::invalid_argument("sscm: need at least one row");
    if (center.size() != data.cols()) throw std::invalid_argument("sscm: center has wrong length");
    SscmAccumulator acc(data.cols());
    acc.add(data, center);
    return acc.result();
}

SpatialSummary summarize(const Dataset& data, double tol, int max_iter) {
    auto med = spatial_median(data, tol, max_iter);
    auto s = sscm(data, med.median);
    return SpatialSummary{std::move(med.median), std::move(s), data.rows(), med.iterations,
                          med.converged};
}

SymmetricMatrix pooled_sscm(const Dataset& data0, const Dataset& data1) {
    if (data0.rows() < 1 || data1.rows() < 1) {
        throw std::invalid_argument("pooled_sscm: both groups must be nonempty");
    }
    if (data0.cols() != data1.cols()) throw std::invalid_argument("pooled_sscm: dimension mismatch");
    const auto s0 = summarize(data0);
    const auto s1 = summarize(data1);
    const double n0 = static_cast<double>(data0.rows());
    const double n1 = static_cast<double>(data1.rows());
    const double w0 = n0 / (n0 + n1);
    const double w1 = n1 / (n0 + n1);
    return s0.sscm * w0 + s1.sscm * w1;
}

SscmAccumulator::SscmAccumulator(Index dim) : sum_(Matrix::Zero(dim, dim)) {}

void SscmAccumulator::add(const Dataset& rows, const Vector& center) {
    if (rows.cols() != sum_.cols()) throw std::invalid_argument("SscmAccumulator: wrong dimension");
    const Matrix u = sign_rows(rows, center);
    sum_.selfadjointView<Eigen::Lower>().rankUpdate(u.transpose());
    count_ += rows.rows();
}

SymmetricMatrix SscmAccumulator::result() const {
    if (count_ == 0) throw std::logic_error("SscmAccumulator: no rows accumulated");
    Matrix s = sum_ / static_cast<double>(count_);
    return SymmetricMatrix::from_lower(std::move(s));
}

}  // namespace sscov
