#pragma once

// File-level commands behind `sscov estimate` and `sscov contaminate`.

#include "sscov_app/config.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace sscov::app {

struct EstimateRequest {
    std::string input;
    Method method = Method::SCLIME;
    /// A single lambda, or a grid scored on `validation`.
    std::optional<double> lambda;
    GridParams grid;
    std::optional<std::string> validation;
    SolverConfig solver;
    std::string output = "precision.csv";
    std::string metadata = "precision.json";
};

struct EstimateOutcome {
    PrecisionEstimate estimate;
    nlohmann::json metadata;
};

/// Reads the CSV sample(s), fits, and returns the estimate plus a metadata
/// record (method, lambda, converged, is_pd, norms, selection losses).
EstimateOutcome estimate_from_files(const EstimateRequest& req);
/// estimate_from_files, then writes the matrix CSV and the JSON record.
EstimateOutcome run_estimate(const EstimateRequest& req);

struct ContaminateRequest {
    std::string input;
    std::string output;
    double rate = 0.0;
    double magnitude = 0.0;
    std::uint64_t seed = 20240601;
};

/// Returns the number of entries replaced in each column.
Index run_contaminate(const ContaminateRequest& req);

}  // namespace sscov::app
