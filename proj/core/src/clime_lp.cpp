#include "sscov/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sscov {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// One column LP in standard form, m = 2p rows:
//   M b+ - M b- + s+ =  e_j + lambda
//  -M b+ + M b- + s- = -e_j + lambda
// with b+, b-, s+, s- >= 0 and cost 1 on b+ and b-. Only the b+ columns are
// stored: the tableau column of b-_k is always minus that of b+_k and its
// reduced cost is 2 minus that of b+_k. Variables are numbered
// [b+ (p) | s+ (p) | s- (p) | b- (p)]; the last block is virtual.
class ColumnLp {
public:
    ColumnLp(const Matrix& m, Index j)
        : p_(m.rows()), t_(2 * p_, 3 * p_), g_(2 * p_), h_(2 * p_), d_(3 * p_), basic_(2 * p_) {
        t_.setZero();
        t_.topLeftCorner(p_, p_) = m;
        t_.bottomLeftCorner(p_, p_) = -m;
        t_.block(0, p_, 2 * p_, 2 * p_).setIdentity();
        g_.setZero();
        g_(j) = 1.0;
        g_(p_ + j) = -1.0;
        h_.setOnes();
        d_.setZero();
        d_.head(p_).setOnes();
        for (Index r = 0; r < 2 * p_; ++r) basic_[static_cast<std::size_t>(r)] = p_ + r;
    }

    enum class Status { Optimal, Infeasible, Capped };

    // Dual simplex at lambda from the current (dual feasible) basis.
    Status solve(double lambda, int max_pivots, int& pivots) {
        const Index m = 2 * p_;
        int stall = 0;
        double last_obj = -std::numeric_limits<double>::infinity();
        for (;;) {
            // leaving row
            Index r = -1;
            double worst = -kFeasTol;
            const bool bland = stall > kStallLimit;
            for (Index i = 0; i < m; ++i) {
                const double x = g_(i) + lambda * h_(i);
                if (x >= -kFeasTol) continue;
                if (bland) {
                    if (r < 0 || basic_[static_cast<std::size_t>(i)] < basic_[static_cast<std::size_t>(r)]) r = i;
                } else if (x < worst) {
                    worst = x;
                    r = i;
                }
            }
            if (r < 0) return Status::Optimal;
            if (pivots >= max_pivots) return Status::Capped;

            // entering column by the dual ratio test; the virtual b- column
            // of k has entry -t(r, k) and reduced cost 2 - d(k)
            Index q = -1;
            double best_ratio = std::numeric_limits<double>::infinity();
            double best_piv = 0.0;
            auto consider = [&](Index var, double a, double dq) {
                if (a >= -kPivTol) return;
                const double ratio = std::max(dq, 0.0) / -a;
                const bool better =
                    ratio < best_ratio - kTieTol ||
                    (ratio <= best_ratio + kTieTol && (bland ? var < q : -a > best_piv));
                if (better) {
                    best_ratio = std::min(ratio, best_ratio);
                    best_piv = -a;
                    q = var;
                }
            };
            for (Index k = 0; k < p_; ++k) {
                consider(k, t_(r, k), d_(k));
                consider(3 * p_ + k, -t_(r, k), 2.0 - d_(k));
            }
            for (Index k = p_; k < 3 * p_; ++k) consider(k, t_(r, k), d_(k));
            if (q < 0) return Status::Infeasible;

            pivot(r, q);
            ++pivots;

            const double obj = objective(lambda);
            if (obj > last_obj + 1e-12 * std::max(1.0, std::abs(obj))) {
                last_obj = obj;
                stall = 0;
            } else {
                ++stall;
            }
        }
    }

    Vector beta(double lambda) const {
        Vector b = Vector::Zero(p_);
        for (Index r = 0; r < 2 * p_; ++r) {
            const Index v = basic_[static_cast<std::size_t>(r)];
            const double x = g_(r) + lambda * h_(r);
            if (v < p_) b(v) += x;
            else if (v >= 3 * p_) b(v - 3 * p_) -= x;
        }
        return b;
    }

private:
    static constexpr double kFeasTol = 1e-10;
    static constexpr double kPivTol = 1e-10;
    static constexpr double kTieTol = 1e-12;
    static constexpr int kStallLimit = 50;

    double objective(double lambda) const {
        double s = 0.0;
        for (Index r = 0; r < 2 * p_; ++r) {
            const Index v = basic_[static_cast<std::size_t>(r)];
            if (v < p_ || v >= 3 * p_) s += g_(r) + lambda * h_(r);
        }
        return s;
    }

    void pivot(Index r, Index var) {
        // a b- variable enters through its b+ twin with the row negated
        const bool neg = var >= 3 * p_;
        const Index q = neg ? var - 3 * p_ : var;
        const double piv = neg ? -t_(r, q) : t_(r, q);
        const double dq = neg ? 2.0 - d_(q) : d_(q);

        t_.row(r) /= piv;
        g_(r) /= piv;
        h_(r) /= piv;
        // the stored column q now represents b+ for both cases; the pivot
        // row is expressed in the entering variable's units
        Vector col = t_.col(q);
        if (neg) col = -col;
        col(r) = 0.0;

        for (Index i = 0; i < 2 * p_; ++i) {
            const double f = col(i);
            if (f == 0.0) continue;
            t_.row(i).noalias() -= f * t_.row(r);
            g_(i) -= f * g_(r);
            h_(i) -= f * h_(r);
        }
        d_.noalias() -= dq * t_.row(r).transpose();
        basic_[static_cast<std::size_t>(r)] = var;
        // keep the entering column exactly unit
        if (neg) {
            t_.col(q).setZero();
            t_(r, q) = -1.0;
            d_(q) = 2.0;
        } else {
            t_.col(q).setZero();
            t_(r, q) = 1.0;
            d_(q) = 0.0;
        }
    }

    Index p_;
    RowMatrix t_;
    Vector g_;
    Vector h_;
    Vector d_;
    std::vector<Index> basic_;
};

void check_path(std::span<const double> lambdas) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] >= 0.0)) throw std::invalid_argument("sclime: lambda must be >= 0");
        if (i > 0 && lambdas[i] > lambdas[i - 1]) {
            throw std::invalid_argument("clime_path: lambdas must be in decreasing order");
        }
    }
}

}  // namespace

std::vector<ClimeColumns> clime_path(const SymmetricMatrix& msym, std::span<const double> lambdas,
                                     const SolverConfig& cfg) {
    cfg.validate();
    check_path(lambdas);
    const Matrix& m = msym.matrix();
    const Index p = m.rows();
    const std::size_t count = lambdas.size();

    std::vector<ClimeColumns> out(count);
    for (auto& c : out) {
        c.beta = Matrix::Zero(p, p);
        c.column_converged.assign(static_cast<std::size_t>(p), false);
    }
    for (Index j = 0; j < p; ++j) {
        ColumnLp lp(m, j);
        Vector last_feasible = Vector::Zero(p);
        bool dead = false;
        for (std::size_t k = 0; k < count; ++k) {
            auto& slot = out[k];
            if (dead) {
                slot.beta.col(j) = last_feasible;
                continue;
            }
            int pivots = 0;
            const auto status = lp.solve(lambdas[k], cfg.max_iter, pivots);
            slot.iterations = std::max(slot.iterations, pivots);
            if (status == ColumnLp::Status::Optimal) {
                last_feasible = lp.beta(lambdas[k]);
                slot.beta.col(j) = last_feasible;
                slot.column_converged[static_cast<std::size_t>(j)] = true;
            } else {
                // infeasible stays infeasible at smaller lambda
                slot.beta.col(j) = last_feasible;
                dead = status == ColumnLp::Status::Infeasible;
                if (!dead) lp = ColumnLp(m, j);
            }
        }
    }
    return out;
}

ClimeColumns clime_columns(const SymmetricMatrix& m, double lambda, const SolverConfig& cfg) {
    const double one[] = {lambda};
    return std::move(clime_path(m, one, cfg).front());
}

}  // namespace sscov
