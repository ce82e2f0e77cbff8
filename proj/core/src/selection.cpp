#include "sscov/selection.hpp"

#include "sscov/applications.hpp"
#include "sscov/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sscov {

LambdaGrid lambda_grid(double min, double max, int k, Spacing spacing) {
    if (!(min > 0.0 && min < max)) throw std::invalid_argument("lambda_grid: need 0 < min < max");
    if (k < 2) throw std::invalid_argument("lambda_grid: need k >= 2");
    LambdaGrid g;
    g.spacing = spacing;
    g.values.resize(static_cast<std::size_t>(k));
    const double last = static_cast<double>(k - 1);
    for (int i = 0; i < k; ++i) {
        const double t = static_cast<double>(i) / last;
        g.values[static_cast<std::size_t>(i)] =
            spacing == Spacing::Log ? std::exp(std::log(min) + t * (std::log(max) - std::log(min)))
                                    : min + t * (max - min);
    }
    g.values.front() = min;
    g.values.back() = max;
    return g;
}

LambdaGrid lambda_grid(double value) {
    if (!(value > 0.0)) throw std::invalid_argument("lambda_grid: value must be positive");
    return LambdaGrid{{value}, Spacing::Log};
}

SymmetricMatrix sample_covariance(const Dataset& data) {
    if (data.rows() < 2) throw std::invalid_argument("sample_covariance: need n >= 2");
    const Vector mean = data.colwise().mean();
    const Matrix centered = data.rowwise() - mean.transpose();
    Matrix s = Matrix::Zero(data.cols(), data.cols());
    s.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    s /= static_cast<double>(data.rows());
    return SymmetricMatrix::from_lower(std::move(s));
}

SymmetricMatrix plugin_matrix(Method method, const Dataset& data) {
    if (is_spatial(method)) {
        return summarize(data).sscm * static_cast<double>(data.cols());
    }
    return sample_covariance(data);
}

double likelihood_loss(const SymmetricMatrix& omega, const SymmetricMatrix& m) {
    if (omega.dim() != m.dim()) throw std::invalid_argument("likelihood_loss: dimension mismatch");
    const auto logdet = log_det_spd(omega);
    if (!logdet) return std::numeric_limits<double>::infinity();
    return omega.matrix().cwiseProduct(m.matrix()).sum() - *logdet;
}

std::size_t argmin_prefer_last(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] <= values[best]) best = i;
    return best;
}

ValidationSelection select_lambda_validation(const Dataset& train, const Dataset& valid,
                                             Method method, const LambdaGrid& grid,
                                             const SolverConfig& cfg) {
    if (grid.values.empty()) throw std::invalid_argument("select_lambda_validation: empty grid");
    if (train.cols() != valid.cols()) {
        throw std::invalid_argument("select_lambda_validation: train/validation dimension mismatch");
    }
    const auto m_train = plugin_matrix(method, train);
    const auto m_valid = plugin_matrix(method, valid);
    auto path = fit_path(method, m_train, grid.values, cfg);

    std::vector<double> losses;
    losses.reserve(path.size());
    for (const auto& est : path) {
        losses.push_back(est.is_pd ? likelihood_loss(est.matrix, m_valid)
                                   : std::numeric_limits<double>::infinity());
    }
    const std::size_t best = argmin_prefer_last(losses);
    if (!std::isfinite(losses[best])) {
        throw std::runtime_error("select_lambda_validation: every " + to_string(method) +
                                 " estimate on the " + std::to_string(grid.values.size()) +
                                 "-point grid [" + std::to_string(grid.values.front()) + ", " +
                                 std::to_string(grid.values.back()) + "] has infinite loss");
    }
    return ValidationSelection{grid.values[best], std::move(path[best]), std::move(losses)};
}

namespace {

// Stratified fold assignment: each class is shuffled and dealt round-robin,
// class 1 continuing where class 0 stopped so that k = n fills every fold.
std::vector<int> stratified_folds(const std::vector<int>& labels, int k, Rng& rng) {
    std::vector<int> fold(labels.size(), 0);
    std::size_t dealt = 0;
    for (int cls = 0; cls <= 1; ++cls) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == cls) idx.push_back(i);
        std::shuffle(idx.begin(), idx.end(), rng.engine());
        for (std::size_t i : idx) fold[i] = static_cast<int>(dealt++ % static_cast<std::size_t>(k));
    }
    return fold;
}

// Every fold must be nonempty and leave both classes in its training part.
bool folds_ok(const std::vector<int>& labels, const std::vector<int>& fold, int k) {
    for (int f = 0; f < k; ++f) {
        bool nonempty = false;
        bool train0 = false;
        bool train1 = false;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (fold[i] == f) {
                nonempty = true;
            } else {
                (labels[i] == 1 ? train1 : train0) = true;
            }
        }
        if (!nonempty || !train0 || !train1) return false;
    }
    return true;
}

}  // namespace

CrossValidation kfold_cv_lda(const LabeledDataset& data, int k, Method method,
                             const LambdaGrid& grid, const SolverConfig& cfg, Rng& rng) {
    const auto n = static_cast<Index>(data.labels.size());
    if (k < 2) throw std::invalid_argument("kfold_cv_lda: k must be >= 2");
    if (k > n) throw std::invalid_argument("kfold_cv_lda: k exceeds the sample size");
    if (n != data.data.rows()) throw std::invalid_argument("kfold_cv_lda: label count mismatch");
    if (grid.values.empty()) throw std::invalid_argument("kfold_cv_lda: empty grid");

    auto fold = stratified_folds(data.labels, k, rng);
    if (!folds_ok(data.labels, fold, k)) {
        fold = stratified_folds(data.labels, k, rng);
        if (!folds_ok(data.labels, fold, k)) {
            throw std::runtime_error("kfold_cv_lda: a training split lacks one of the classes");
        }
    }

    std::vector<double> rates(grid.values.size(), 0.0);
    for (int f = 0; f < k; ++f) {
        LabeledDataset train;
        LabeledDataset test;
        std::vector<Index> tr;
        std::vector<Index> te;
        for (Index i = 0; i < n; ++i) (fold[static_cast<std::size_t>(i)] == f ? te : tr).push_back(i);
        auto take = [&](const std::vector<Index>& rows, LabeledDataset& out) {
            out.data.resize(static_cast<Index>(rows.size()), data.data.cols());
            out.labels.resize(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                out.data.row(static_cast<Index>(r)) = data.data.row(rows[r]);
                out.labels[r] = data.labels[static_cast<std::size_t>(rows[r])];
            }
        };
        take(tr, train);
        take(te, test);
        const auto [d0, d1] = train.split();
        const auto rules = lda_fit_path(d0, d1, method, grid, cfg);
        for (std::size_t g = 0; g < rules.size(); ++g) {
            const auto pred = lda_predict(rules[g], test.data);
            rates[g] += misclassification_rate(test.labels, pred) / static_cast<double>(k);
        }
    }
    const std::size_t best = argmin_prefer_last(rates);
    return CrossValidation{grid.values[best], std::move(rates)};
}

}  // namespace sscov
