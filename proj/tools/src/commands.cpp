#include "sscov_app/commands.hpp"

#include "sscov_app/csv.hpp"

#include "sscov/samplers.hpp"

#include <cmath>
#include <limits>

namespace sscov::app {

namespace {

nlohmann::json finite_or_null(double x) {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

EstimateOutcome estimate_from_files(const EstimateRequest& req) {
    const auto train = read_csv_matrix(req.input);
    if (train.values.rows() < 2) throw CsvError(req.input + ": need at least 2 rows");
    const Index p = train.values.cols();

    nlohmann::json meta;
    meta["input"] = req.input;
    meta["method"] = to_string(req.method);
    meta["n"] = train.values.rows();
    meta["p"] = p;

    std::optional<PrecisionEstimate> est;
    if (req.lambda) {
        const auto m = plugin_matrix(req.method, train.values);
        est = estimate(req.method, m, *req.lambda, req.solver);
    } else {
        if (!req.validation) {
            throw std::invalid_argument("estimate: a lambda grid needs a validation file");
        }
        const auto valid = read_csv_matrix(*req.validation);
        if (valid.values.cols() != p) {
            throw CsvError("dimension mismatch: " + req.input + " has " + std::to_string(p) +
                           " columns, " + *req.validation + " has " + std::to_string(valid.values.cols()));
        }
        const auto grid = req.grid.grid();
        auto sel = select_lambda_validation(train.values, valid.values, req.method, grid, req.solver);
        meta["validation"] = *req.validation;
        nlohmann::json path = nlohmann::json::array();
        for (std::size_t i = 0; i < grid.values.size(); ++i) {
            path.push_back({{"lambda", grid.values[i]}, {"loss", finite_or_null(sel.losses[i])}});
        }
        meta["selection"] = path;
        est = std::move(sel.estimate);
    }

    const Matrix& v = est->matrix.matrix();
    meta["lambda"] = est->lambda;
    meta["converged"] = est->converged;
    meta["is_pd"] = est->is_pd;
    meta["iterations"] = est->iterations;
    double op = std::numeric_limits<double>::quiet_NaN();
    try {
        op = norm_operator(v);
    } catch (const ConvergenceError& e) {
        op = e.last_value();
    }
    meta["norms"] = {{"frobenius", norm_frobenius(v)},
                     {"matrix_l1", norm_matrix_l1(v)},
                     {"operator", finite_or_null(op)},
                     {"elementwise_inf", norm_elementwise_inf(v)}};
    return EstimateOutcome{std::move(*est), std::move(meta)};
}

EstimateOutcome run_estimate(const EstimateRequest& req) {
    auto out = estimate_from_files(req);
    write_text_file(req.output, format_csv_matrix(out.estimate.matrix.matrix()));
    write_text_file(req.metadata, out.metadata.dump(2) + "\n");
    return out;
}

Index run_contaminate(const ContaminateRequest& req) {
    if (!(req.rate >= 0.0 && req.rate < 1.0)) throw std::invalid_argument("contaminate: rate must lie in [0, 1)");
    const auto in = read_csv_matrix(req.input);
    Rng rng(req.seed);
    const auto out = contaminate(in.values, req.rate, req.magnitude, rng);
    write_text_file(req.output, format_csv_matrix(out, in.header));
    return contamination_count(in.values.rows(), req.rate);
}

}  // namespace sscov::app
