#pragma once

// Simulation-study runners. Replication r draws everything from
// Rng::stream(seed, r), so results do not depend on the thread count.

#include "sscov_app/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sscov::app {

struct ResultRow {
    std::string method;
    std::string metric;
    Index p;
    double mean;
    /// Sample standard deviation, divisor R - 1; 0 when R < 2.
    double sd;
    /// Replications dropped because the method failed on them.
    int excluded;
};

struct ResultTable {
    std::vector<ResultRow> rows;

    const ResultRow* find(const std::string& method, const std::string& metric, Index p) const;
};

/// Header `method,metric,p,mean,sd,excluded`.
std::string format_table_csv(const ResultTable& table);

/// Mean and sample standard deviation (divisor size - 1; 0 below two values).
std::pair<double, double> mean_sd(const std::vector<double>& values);

/// Frobenius, matrix-l1 and operator losses of the validation-tuned estimate
/// against Omega (or V0 with loss_target = v0).
ResultTable run_precision_experiment(const ExperimentConfig& cfg);

struct RocCurve {
    std::string method;
    std::vector<double> lambda;
    std::vector<double> fpr;
    std::vector<double> tpr;
};

struct RocResult {
    /// Pointwise averages over replications, grid order.
    std::vector<RocCurve> curves;
    /// Per-replication AUC summary, metric "auc".
    ResultTable auc;
};

/// Trapezoidal area under (fpr, tpr) points, sorted by fpr, with (0, 0) and
/// (1, 1) appended.
double roc_auc(const std::vector<double>& fpr, const std::vector<double>& tpr);

RocResult run_graph_roc_experiment(const ExperimentConfig& cfg);

/// Header `method,lambda,fpr,tpr`.
std::string format_roc_csv(const std::vector<RocCurve>& curves);

/// A self-contained SVG line chart, one polyline per curve.
std::string render_roc_svg(const std::vector<RocCurve>& curves, const std::string& title);

/// Specificity, sensitivity, MCC and misclassification of the rule tuned by
/// validation misclassification, measured on an independent test sample.
ResultTable run_lda_experiment(const ExperimentConfig& cfg);

/// Writes the experiment's files into cfg.out_dir and a short summary to
/// `log`. Returns the paths written.
std::vector<std::string> run_and_write(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace sscov::app
