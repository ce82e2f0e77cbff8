#pragma once

// Generative models for the simulation studies: precision/covariance pairs,
// elliptical samples, contamination, labeled LDA data, and the closed-form
// moments of the uniform distribution on the unit sphere.

#include "sscov/linalg.hpp"
#include "sscov/random.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace sscov {

/// n x p sample matrix, one observation per row.
using Dataset = Matrix;

struct Edge {
    Index i;
    Index j;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Strict upper-triangle support {(i, j) : i < j, a_ij != 0}, sorted.
std::vector<Edge> offdiagonal_support(const Matrix& a);

// Banded precision: omega_ij = rho^|i-j|.
struct ModelI {
    double rho = 0.6;
};
// Random sparse B (entries edge_val w.p. edge_prob), shifted to condition
// number p and standardized to unit diagonal.
struct ModelII {
    double edge_prob = 0.1;
    double edge_val = 0.5;
};
// AR(1) covariance sigma_ij = rho^|i-j|; tridiagonal precision.
struct ModelIII {
    double rho = 0.6;
};
// Random geometric graph on [0,1]^2 with degree cap. `scale` is the
// bandwidth in exp(-|y_i - y_j|^2 / scale).
struct GeometricGraph {
    int max_degree = 4;
    double edge_val = 0.145;
    double scale = 0.25;
};

using ModelSpec = std::variant<ModelI, ModelII, ModelIII, GeometricGraph>;

std::string model_name(const ModelSpec& spec);

struct PrecisionModel {
    ModelSpec spec;
    SymmetricMatrix omega;
    SymmetricMatrix sigma;
    std::vector<Edge> edges;

    Index dim() const noexcept { return omega.dim(); }
    /// Shape-matrix inverse V0 = (tr(sigma) / p) * omega.
    SymmetricMatrix v0() const;
};

struct NormalLaw {};
struct StudentTLaw {
    double nu = 3.0;
    double scale = 1.0;
};
struct MixtureNormalLaw {
    double weight_heavy = 0.2;
    double sigma_mult = 3.0;
    double scale = 1.0;
};

using EllipticalLaw = std::variant<NormalLaw, StudentTLaw, MixtureNormalLaw>;

/// t_nu scaled to unit marginal variance: scale = 1 / sqrt(nu / (nu - 2)).
StudentTLaw student_t(double nu);
/// Scale-mixture scaled to unit variance:
/// scale = 1 / sqrt((1 - w) + w * sigma_mult^2).
MixtureNormalLaw mixture_normal(double weight_heavy, double sigma_mult);

std::string law_name(const EllipticalLaw& law);

struct LabeledDataset {
    Dataset data;
    std::vector<int> labels;

    /// Rows with label 0 and label 1, in original order.
    std::pair<Dataset, Dataset> split() const;
};

PrecisionModel gen_model1(Index p, double rho);
PrecisionModel gen_model2(Index p, double edge_prob, double edge_val, Rng& rng);
PrecisionModel gen_model3(Index p, double rho);
PrecisionModel gen_geometric_graph_model(Index p, int max_degree, double edge_val, Rng& rng,
                                         double scale = 0.25);
PrecisionModel generate_model(const ModelSpec& spec, Index p, Rng& rng);

/// Model II from a realized adjacency B (zero diagonal). Returns nullopt when
/// B + delta*I cannot reach condition number p (all eigenvalues equal).
std::optional<PrecisionModel> model2_from_adjacency(const SymmetricMatrix& b, double edge_prob,
                                                    double edge_val);

/// Inclusion probability of a geometric-graph edge at squared distance d2.
double geometric_edge_probability(double d2, double scale = 0.25);

Dataset sample_elliptical(const EllipticalLaw& law, const Vector& mu, const SymmetricMatrix& sigma,
                          Index n, Rng& rng);
/// Same, reusing an already computed Cholesky factor of sigma.
Dataset sample_elliptical(const EllipticalLaw& law, const Vector& mu, const CholeskyFactor& chol,
                          Index n, Rng& rng);

/// Labels ~ Bernoulli(p1); class 0 mean 0, class 1 mean (a,..,a,0,..,0)
/// with s leading entries a. Redraws if a class comes out empty.
LabeledDataset gen_lda_data(const PrecisionModel& model, const EllipticalLaw& law, Index n,
                            double p1, Index s, double a, Rng& rng);

/// Number of entries replaced per column: ceil(n * r).
Index contamination_count(Index n, double r);
/// Per column, ceil(n*r) distinct rows are set to +a or -a with equal
/// probability.
Dataset contaminate(const Dataset& data, double r, double a, Rng& rng);

/// E[prod u_i^{m_i}] for u uniform on the unit sphere in R^p,
/// p = exponents.size().
double sphere_moment(std::span<const int> exponents);

}  // namespace sscov
