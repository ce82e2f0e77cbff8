#include "sscov/applications.hpp"

#include "sscov/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sscov {

RecoveryRates recovery_rates(const SymmetricMatrix& estimate, double tau,
                             std::span<const Edge> truth_edges) {
    const auto thresholded = threshold_estimate(estimate, tau);
    const Index p = estimate.dim();
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> is_edge =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(p, p, false);
    for (const auto& e : truth_edges) {
        if (e.i < 0 || e.j < 0 || e.i >= p || e.j >= p || e.i == e.j) {
            throw std::invalid_argument("recovery_rates: edge index out of range");
        }
        is_edge(std::min(e.i, e.j), std::max(e.i, e.j)) = true;
    }
    long true_pos = 0;
    long false_pos = 0;
    long edges = 0;
    long non_edges = 0;
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < j; ++i) {
            const bool found = thresholded(i, j) != 0.0;
            if (is_edge(i, j)) {
                ++edges;
                true_pos += found;
            } else {
                ++non_edges;
                false_pos += found;
            }
        }
    }
    RecoveryRates r;
    if (edges > 0) r.tpr = static_cast<double>(true_pos) / static_cast<double>(edges);
    if (non_edges > 0) r.fpr = static_cast<double>(false_pos) / static_cast<double>(non_edges);
    return r;
}

std::vector<RocPoint> roc_path(const Dataset& train, const PrecisionModel& truth, Method method,
                               const LambdaGrid& grid, double tau, const SolverConfig& cfg) {
    if (grid.values.empty()) throw std::invalid_argument("roc_path: empty grid");
    if (train.cols() != truth.dim()) throw std::invalid_argument("roc_path: dimension mismatch");
    const auto m = plugin_matrix(method, train);
    const auto path = fit_path(method, m, grid.values, cfg);
    std::vector<RocPoint> points;
    points.reserve(path.size());
    for (const auto& est : path) {
        const auto rates = recovery_rates(est.matrix, tau, truth.edges);
        points.push_back(RocPoint{est.lambda, rates.tpr, rates.fpr, est.converged});
    }
    return points;
}

bool sign_consistency_check(const SymmetricMatrix& estimate, double tau,
                            const SymmetricMatrix& truth) {
    if (estimate.dim() != truth.dim()) {
        throw std::invalid_argument("sign_consistency_check: dimension mismatch");
    }
    const auto est_signs = sign_support(threshold_estimate(estimate, tau)).signs;
    const auto true_signs = sign_support(truth).signs;
    return est_signs == true_signs;
}

namespace {

struct LdaInputs {
    Vector mu0;
    Vector mu1;
    SymmetricMatrix plugin;
};

LdaInputs lda_inputs(const Dataset& data0, const Dataset& data1, Method method) {
    if (data0.rows() < 1 || data1.rows() < 1) {
        throw std::invalid_argument("lda_fit: both classes must be nonempty");
    }
    if (data0.cols() != data1.cols()) throw std::invalid_argument("lda_fit: dimension mismatch");
    const auto p = static_cast<double>(data0.cols());
    const double n0 = static_cast<double>(data0.rows());
    const double n1 = static_cast<double>(data1.rows());
    if (is_spatial(method)) {
        const auto s0 = summarize(data0);
        const auto s1 = summarize(data1);
        auto pooled = s0.sscm * (n0 / (n0 + n1)) + s1.sscm * (n1 / (n0 + n1));
        return LdaInputs{s0.median, s1.median, pooled * p};
    }
    const Vector mu0 = data0.colwise().mean();
    const Vector mu1 = data1.colwise().mean();
    // pooled within-class covariance, divisor n0 + n1
    const Matrix c0 = data0.rowwise() - mu0.transpose();
    const Matrix c1 = data1.rowwise() - mu1.transpose();
    Matrix s = Matrix::Zero(data0.cols(), data0.cols());
    s.selfadjointView<Eigen::Lower>().rankUpdate(c0.transpose());
    s.selfadjointView<Eigen::Lower>().rankUpdate(c1.transpose());
    s /= (n0 + n1);
    return LdaInputs{mu0, mu1, SymmetricMatrix::from_lower(std::move(s))};
}

LdaRule make_rule(const LdaInputs& in, const PrecisionEstimate& est, Method method) {
    const Vector mu_d = 0.5 * (in.mu1 - in.mu0);
    const Vector anchor = 0.5 * (in.mu1 + in.mu0);
    Vector w = est.matrix.matrix() * mu_d;
    return LdaRule{std::move(w), anchor, method, est.lambda, est.converged};
}

}  // namespace

LdaRule lda_fit(const Dataset& data0, const Dataset& data1, Method method, double lambda,
                const SolverConfig& cfg) {
    const auto in = lda_inputs(data0, data1, method);
    const auto est = estimate(method, in.plugin, lambda, cfg);
    return make_rule(in, est, method);
}

std::vector<LdaRule> lda_fit_path(const Dataset& data0, const Dataset& data1, Method method,
                                  const LambdaGrid& grid, const SolverConfig& cfg) {
    const auto in = lda_inputs(data0, data1, method);
    const auto path = fit_path(method, in.plugin, grid.values, cfg);
    std::vector<LdaRule> rules;
    rules.reserve(path.size());
    for (const auto& est : path) rules.push_back(make_rule(in, est, method));
    return rules;
}

int lda_predict(const LdaRule& rule, const Vector& x) {
    return rule.w.dot(x - rule.anchor) > 0.0 ? 1 : 0;
}

std::vector<int> lda_predict(const LdaRule& rule, const Dataset& data) {
    const Vector scores = (data.rowwise() - rule.anchor.transpose()) * rule.w;
    std::vector<int> out(static_cast<std::size_t>(data.rows()));
    for (Index i = 0; i < data.rows(); ++i) out[static_cast<std::size_t>(i)] = scores(i) > 0.0 ? 1 : 0;
    return out;
}

ClassificationReport classification_metrics(std::span<const int> truth,
                                            std::span<const int> predicted) {
    if (truth.size() != predicted.size() || truth.empty()) {
        throw std::invalid_argument("classification_metrics: need equal, nonzero lengths");
    }
    ClassificationReport r;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool pos = truth[i] == 1;
        const bool hit = predicted[i] == 1;
        if (pos && hit) ++r.tp;
        else if (!pos && !hit) ++r.tn;
        else if (!pos && hit) ++r.fp;
        else ++r.fn;
    }
    const auto d = [](long x) { return static_cast<double>(x); };
    r.specificity = (r.tn + r.fp) > 0 ? d(r.tn) / d(r.tn + r.fp) : 0.0;
    r.sensitivity = (r.tp + r.fn) > 0 ? d(r.tp) / d(r.tp + r.fn) : 0.0;
    const double denom = std::sqrt(d(r.tp + r.fp) * d(r.tp + r.fn) * d(r.tn + r.fp) * d(r.tn + r.fn));
    r.mcc = denom > 0.0 ? (d(r.tp) * d(r.tn) - d(r.fp) * d(r.fn)) / denom : 0.0;
    r.misclassification = d(r.fp + r.fn) / d(static_cast<long>(truth.size()));
    return r;
}

double misclassification_rate(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() != predicted.size() || truth.empty()) {
        throw std::invalid_argument("misclassification_rate: need equal, nonzero lengths");
    }
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) wrong += (truth[i] != predicted[i]);
    return static_cast<double>(wrong) / static_cast<double>(truth.size());
}

}  // namespace sscov
