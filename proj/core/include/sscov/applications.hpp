#pragma once

// Graphical-model support recovery and the robust Fisher discriminant rule.

#include "sscov/estimators.hpp"
#include "sscov/samplers.hpp"
#include "sscov/selection.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sscov {

struct RecoveryRates {
    std::optional<double> tpr;  // absent when the truth has no edges
    std::optional<double> fpr;  // absent when the truth is complete
};

/// Thresholds at tau, then compares the strict upper-triangle support with
/// `truth_edges`.
RecoveryRates recovery_rates(const SymmetricMatrix& estimate, double tau,
                             std::span<const Edge> truth_edges);

struct RocPoint {
    double lambda;
    std::optional<double> tpr;
    std::optional<double> fpr;
    bool converged = true;
};

/// One point per grid value in grid order, estimates warm-started along the
/// path. No monotone reordering.
std::vector<RocPoint> roc_path(const Dataset& train, const PrecisionModel& truth, Method method,
                               const LambdaGrid& grid, double tau, const SolverConfig& cfg);

/// True iff the thresholded estimate has exactly the sign pattern of truth.
bool sign_consistency_check(const SymmetricMatrix& estimate, double tau,
                            const SymmetricMatrix& truth);

struct LdaRule {
    Vector w;
    Vector anchor;
    Method method;
    double lambda;
    bool converged = true;
};

/// Spatial methods use spatial medians and p * pooled SSCM; classical ones
/// use sample means and the pooled sample covariance. w = V_hat * mu_d with
/// mu_d = (mu1 - mu0) / 2 and anchor (mu1 + mu0) / 2.
LdaRule lda_fit(const Dataset& data0, const Dataset& data1, Method method, double lambda,
                const SolverConfig& cfg);
/// Rules for every grid value, grid order (warm-started path).
std::vector<LdaRule> lda_fit_path(const Dataset& data0, const Dataset& data1, Method method,
                                  const LambdaGrid& grid, const SolverConfig& cfg);

/// 1 iff w^T (x - anchor) > 0.
int lda_predict(const LdaRule& rule, const Vector& x);
std::vector<int> lda_predict(const LdaRule& rule, const Dataset& data);

struct ClassificationReport {
    long tp = 0;
    long tn = 0;
    long fp = 0;
    long fn = 0;
    double specificity = 0.0;
    double sensitivity = 0.0;
    double mcc = 0.0;
    double misclassification = 0.0;
};

/// Label 1 is the positive class. A zero MCC denominator yields MCC = 0;
/// an empty class yields rate 0 for the undefined specificity/sensitivity.
ClassificationReport classification_metrics(std::span<const int> truth,
                                            std::span<const int> predicted);

double misclassification_rate(std::span<const int> truth, std::span<const int> predicted);

}  // namespace sscov
