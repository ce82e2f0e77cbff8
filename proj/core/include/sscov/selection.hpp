#pragma once

// Tuning-parameter grids and data-driven lambda selection.

#include "sscov/estimators.hpp"
#include "sscov/linalg.hpp"
#include "sscov/random.hpp"
#include "sscov/samplers.hpp"

#include <vector>

namespace sscov {

enum class Spacing { Log, Linear };

struct LambdaGrid {
    std::vector<double> values;  // strictly increasing, positive
    Spacing spacing = Spacing::Log;
};

/// k values from min to max inclusive. Requires 0 < min < max and k >= 2.
LambdaGrid lambda_grid(double min, double max, int k, Spacing spacing = Spacing::Log);
/// Single-value grid.
LambdaGrid lambda_grid(double value);

/// (1/n) sum (X_i - mean)(X_i - mean)^T.
SymmetricMatrix sample_covariance(const Dataset& data);

/// Plug-in matrix a method consumes: p * SSCM (centered at the spatial
/// median) for spatial methods, the sample covariance otherwise.
SymmetricMatrix plugin_matrix(Method method, const Dataset& data);

/// <Omega, M> - log det Omega; +infinity when Omega is not positive definite.
double likelihood_loss(const SymmetricMatrix& omega, const SymmetricMatrix& m);

struct ValidationSelection {
    double lambda;
    PrecisionEstimate estimate;
    /// Validation loss per grid value, grid order.
    std::vector<double> losses;
};

/// Fits on `train` at every grid value and keeps the one with the smallest
/// likelihood loss on `valid`. Ties go to the larger lambda. Throws
/// std::runtime_error when every loss is infinite.
ValidationSelection select_lambda_validation(const Dataset& train, const Dataset& valid,
                                             Method method, const LambdaGrid& grid,
                                             const SolverConfig& cfg);

struct CrossValidation {
    double lambda;
    /// Mean fold misclassification rate per grid value.
    std::vector<double> rates;
};

/// Stratified k-fold cross-validation of the LDA rule; picks the lambda with
/// the smallest mean misclassification rate, ties toward the larger lambda.
/// Each fold's training part must hold both classes; a bad split is redrawn
/// once, then std::runtime_error. k = n gives leave-one-out.
CrossValidation kfold_cv_lda(const LabeledDataset& data, int k, Method method,
                             const LambdaGrid& grid, const SolverConfig& cfg, Rng& rng);

/// Index of the smallest value; ties resolve to the highest index.
std::size_t argmin_prefer_last(const std::vector<double>& values);

}  // namespace sscov
