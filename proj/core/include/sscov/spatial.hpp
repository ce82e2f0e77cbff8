#pragma once

// Spatial median and spatial-sign covariance matrices.

#include "sscov/linalg.hpp"
#include "sscov/samplers.hpp"

namespace sscov {

/// x / |x|_2, or the zero vector when x == 0.
Vector sign_vector(const Vector& x);

struct SpatialMedian {
    Vector median;
    int iterations = 0;
    bool converged = false;
};

/// Minimizer of sum_i |X_i - mu|_2 by Weiszfeld iteration with the
/// Vardi-Zhang correction at data points, started from the coordinatewise
/// median. Stops when the step is below tol * (1 + |mu|).
SpatialMedian spatial_median(const Dataset& data, double tol = 1e-8, int max_iter = 1000);

/// Objective sum_i |X_i - mu|_2.
double spatial_median_objective(const Dataset& data, const Vector& mu);

/// (1/n) sum_i U(X_i - center) U(X_i - center)^T.
SymmetricMatrix sscm(const Dataset& data, const Vector& center);

struct SpatialSummary {
    Vector median;
    SymmetricMatrix sscm;
    Index n;
    int iterations;
    bool converged;
};

/// Spatial median plus the SSCM centered at it.
SpatialSummary summarize(const Dataset& data, double tol = 1e-8, int max_iter = 1000);

/// Sample-size weighted average of the two groups' SSCMs, each centered at
/// its own spatial median.
SymmetricMatrix pooled_sscm(const Dataset& data0, const Dataset& data1);

/// Streams rows into an SSCM so samples too large for memory can be
/// accumulated chunk by chunk.
class SscmAccumulator {
public:
    explicit SscmAccumulator(Index dim);

    void add(const Dataset& rows, const Vector& center);
    Index count() const noexcept { return count_; }
    SymmetricMatrix result() const;

private:
    Matrix sum_;
    Index count_ = 0;
};

}  // namespace sscov
