#include "sscov/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sscov {

namespace {

constexpr int kMaxRegenerations = 1000;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(Index p, const char* who) {
    if (p < 2) throw std::invalid_argument(std::string(who) + ": p must be >= 2");
}

PrecisionModel finish_model(ModelSpec spec, SymmetricMatrix omega, SymmetricMatrix sigma) {
    auto edges = offdiagonal_support(omega.matrix());
    return PrecisionModel{std::move(spec), std::move(omega), std::move(sigma), std::move(edges)};
}

// Tridiagonal inverse of the AR(1) matrix rho^|i-j|.
SymmetricMatrix ar1_inverse(Index p, double rho) {
    SymmetricMatrix inv(p);
    const double d = 1.0 - rho * rho;
    for (Index i = 0; i < p; ++i) {
        const bool edge = (i == 0 || i == p - 1);
        inv.set(i, i, edge ? 1.0 / d : (1.0 + rho * rho) / d);
        if (i + 1 < p) inv.set(i, i + 1, -rho / d);
    }
    return inv;
}

SymmetricMatrix ar1(Index p, double rho) {
    SymmetricMatrix m(p);
    for (Index i = 0; i < p; ++i)
        for (Index j = i; j < p; ++j) m.set(i, j, std::pow(rho, static_cast<double>(j - i)));
    return m;
}

}  // namespace

std::vector<Edge> offdiagonal_support(const Matrix& a) {
    std::vector<Edge> edges;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = i + 1; j < a.cols(); ++j)
            if (a(i, j) != 0.0) edges.push_back({i, j});
    return edges;
}

std::string model_name(const ModelSpec& spec) {
    return std::visit(overloaded{[](const ModelI&) { return std::string("model1"); },
                                 [](const ModelII&) { return std::string("model2"); },
                                 [](const ModelIII&) { return std::string("model3"); },
                                 [](const GeometricGraph&) { return std::string("geometric"); }},
                      spec);
}

SymmetricMatrix PrecisionModel::v0() const {
    const double factor = sigma.matrix().trace() / static_cast<double>(dim());
    return omega * factor;
}

StudentTLaw student_t(double nu) {
    if (!(nu > 2.0)) throw std::invalid_argument("student_t: nu must exceed 2 for unit variance");
    return StudentTLaw{nu, 1.0 / std::sqrt(nu / (nu - 2.0))};
}

MixtureNormalLaw mixture_normal(double weight_heavy, double sigma_mult) {
    if (weight_heavy < 0.0 || weight_heavy > 1.0) {
        throw std::invalid_argument("mixture_normal: weight_heavy must lie in [0, 1]");
    }
    const double var = (1.0 - weight_heavy) + weight_heavy * sigma_mult * sigma_mult;
    return MixtureNormalLaw{weight_heavy, sigma_mult, 1.0 / std::sqrt(var)};
}

std::string law_name(const EllipticalLaw& law) {
    return std::visit(overloaded{[](const NormalLaw&) { return std::string("normal"); },
                                 [](const StudentTLaw&) { return std::string("t"); },
                                 [](const MixtureNormalLaw&) { return std::string("mixture"); }},
                      law);
}

std::pair<Dataset, Dataset> LabeledDataset::split() const {
    if (static_cast<Index>(labels.size()) != data.rows()) {
        throw std::invalid_argument("LabeledDataset: label count does not match row count");
    }
    const Index n1 = std::count(labels.begin(), labels.end(), 1);
    const Index n0 = data.rows() - n1;
    Dataset d0(n0, data.cols());
    Dataset d1(n1, data.cols());
    Index i0 = 0;
    Index i1 = 0;
    for (Index i = 0; i < data.rows(); ++i) {
        if (labels[static_cast<std::size_t>(i)] == 1)
            d1.row(i1++) = data.row(i);
        else
            d0.row(i0++) = data.row(i);
    }
    return {std::move(d0), std::move(d1)};
}

PrecisionModel gen_model1(Index p, double rho) {
    require_dim(p, "gen_model1");
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("gen_model1: |rho| must be < 1");
    return finish_model(ModelI{rho}, ar1(p, rho), ar1_inverse(p, rho));
}

PrecisionModel gen_model3(Index p, double rho) {
    require_dim(p, "gen_model3");
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("gen_model3: |rho| must be < 1");
    return finish_model(ModelIII{rho}, ar1_inverse(p, rho), ar1(p, rho));
}

std::optional<PrecisionModel> model2_from_adjacency(const SymmetricMatrix& b, double edge_prob,
                                                    double edge_val) {
    const Index p = b.dim();
    const auto ev = sym_eigenvalues(b);
    const double lmax = ev.front();
    const double lmin = ev.back();
    const double target = static_cast<double>(p);
    if (lmax - lmin <= 1e-12 * std::max(1.0, std::abs(lmax))) return std::nullopt;

    // cond(delta) = (lmax + delta) / (lmin + delta) decreases from +inf at
    // delta = -lmin toward 1; bisect for cond = p.
    auto cond = [&](double delta) { return (lmax + delta) / (lmin + delta); };
    const double spread = lmax - lmin;
    double lo = -lmin + 1e-9 * spread;
    double hi = -lmin + spread;
    while (cond(hi) > target) hi = -lmin + 2.0 * (hi + lmin);
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (cond(mid) > target ? lo : hi) = mid;
    }
    const double delta = 0.5 * (lo + hi);

    Matrix shifted = b.matrix();
    shifted.diagonal().array() += delta;
    Vector inv_sqrt_d = shifted.diagonal().cwiseSqrt().cwiseInverse();
    Matrix omega = inv_sqrt_d.asDiagonal() * shifted * inv_sqrt_d.asDiagonal();
    auto omega_sym = SymmetricMatrix::from_lower(std::move(omega));
    auto sigma = invert_spd(omega_sym);
    if (!sigma) return std::nullopt;
    return finish_model(ModelII{edge_prob, edge_val}, std::move(omega_sym), std::move(*sigma));
}

PrecisionModel gen_model2(Index p, double edge_prob, double edge_val, Rng& rng) {
    require_dim(p, "gen_model2");
    for (int attempt = 0; attempt < kMaxRegenerations; ++attempt) {
        SymmetricMatrix b(p);
        for (Index i = 0; i < p; ++i)
            for (Index j = i + 1; j < p; ++j)
                if (rng.bernoulli(edge_prob)) b.set(i, j, edge_val);
        if (auto model = model2_from_adjacency(b, edge_prob, edge_val)) return std::move(*model);
    }
    throw std::runtime_error("gen_model2: could not draw a non-degenerate adjacency matrix");
}

double geometric_edge_probability(double d2, double scale) {
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::acos(-1.0));
    return std::exp(-d2 / scale) * inv_sqrt_2pi;
}

PrecisionModel gen_geometric_graph_model(Index p, int max_degree, double edge_val, Rng& rng,
                                         double scale) {
    require_dim(p, "gen_geometric_graph_model");
    for (int attempt = 0; attempt < kMaxRegenerations; ++attempt) {
        Matrix y(p, 2);
        for (Index i = 0; i < p; ++i) {
            y(i, 0) = rng.uniform();
            y(i, 1) = rng.uniform();
        }
        std::vector<Edge> pairs;
        pairs.reserve(static_cast<std::size_t>(p * (p - 1) / 2));
        for (Index i = 0; i < p; ++i)
            for (Index j = i + 1; j < p; ++j) pairs.push_back({i, j});
        std::shuffle(pairs.begin(), pairs.end(), rng.engine());

        std::vector<int> degree(static_cast<std::size_t>(p), 0);
        SymmetricMatrix omega = SymmetricMatrix::identity(p);
        for (const auto& e : pairs) {
            auto& di = degree[static_cast<std::size_t>(e.i)];
            auto& dj = degree[static_cast<std::size_t>(e.j)];
            if (di >= max_degree || dj >= max_degree) continue;
            const double d2 = (y.row(e.i) - y.row(e.j)).squaredNorm();
            if (rng.bernoulli(geometric_edge_probability(d2, scale))) {
                omega.set(e.i, e.j, edge_val);
                ++di;
                ++dj;
            }
        }
        if (auto sigma = invert_spd(omega)) {
            return finish_model(GeometricGraph{max_degree, edge_val, scale}, std::move(omega),
                                std::move(*sigma));
        }
    }
    throw std::runtime_error("gen_geometric_graph_model: no positive definite graph drawn");
}

PrecisionModel generate_model(const ModelSpec& spec, Index p, Rng& rng) {
    return std::visit(
        overloaded{[&](const ModelI& m) { return gen_model1(p, m.rho); },
                   [&](const ModelII& m) { return gen_model2(p, m.edge_prob, m.edge_val, rng); },
                   [&](const ModelIII& m) { return gen_model3(p, m.rho); },
                   [&](const GeometricGraph& m) {
                       return gen_geometric_graph_model(p, m.max_degree, m.edge_val, rng, m.scale);
                   }},
        spec);
}

Dataset sample_elliptical(const EllipticalLaw& law, const Vector& mu, const CholeskyFactor& chol,
                          Index n, Rng& rng) {
    const Index p = chol.dim();
    if (mu.size() != p) throw std::invalid_argument("sample_elliptical: mean has wrong length");
    Matrix z(n, p);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < p; ++j) z(i, j) = rng.normal();

    // per-row radial multiplier
    Vector radial = Vector::Ones(n);
    std::visit(overloaded{[](const NormalLaw&) {},
                          [&](const StudentTLaw& t) {
                              for (Index i = 0; i < n; ++i)
                                  radial(i) = t.scale / std::sqrt(rng.chi_squared(t.nu) / t.nu);
                          },
                          [&](const MixtureNormalLaw& m) {
                              for (Index i = 0; i < n; ++i)
                                  radial(i) = m.scale * (rng.bernoulli(m.weight_heavy)
                                                             ? m.sigma_mult
                                                             : 1.0);
                          }},
               law);

    Dataset x = z * chol.lower().triangularView<Eigen::Lower>().transpose();
    x = radial.asDiagonal() * x;
    x.rowwise() += mu.transpose();
    return x;
}

Dataset sample_elliptical(const EllipticalLaw& law, const Vector& mu, const SymmetricMatrix& sigma,
                          Index n, Rng& rng) {
    auto chol = cholesky(sigma);
    if (!chol) throw NotPositiveDefinite("sample_elliptical: covariance is not positive definite");
    return sample_elliptical(law, mu, *chol, n, rng);
}

LabeledDataset gen_lda_data(const PrecisionModel& model, const EllipticalLaw& law, Index n,
                            double p1, Index s, double a, Rng& rng) {
    const Index p = model.dim();
    if (!(p1 > 0.0 && p1 < 1.0)) throw std::invalid_argument("gen_lda_data: p1 must lie in (0,1)");
    if (s < 1 || s > p) throw std::invalid_argument("gen_lda_data: s must lie in [1, p]");
    auto chol = cholesky(model.sigma);
    if (!chol) throw NotPositiveDefinite("gen_lda_data: model covariance is not positive definite");

    Vector mu1 = Vector::Zero(p);
    mu1.head(s).setConstant(a);
    const Vector mu0 = Vector::Zero(p);

    for (int attempt = 0; attempt < kMaxRegenerations; ++attempt) {
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (auto& y : labels) y = rng.bernoulli(p1) ? 1 : 0;
        const Index n1 = std::count(labels.begin(), labels.end(), 1);
        if (n1 == 0 || n1 == n) continue;

        Dataset x0 = sample_elliptical(law, mu0, *chol, n - n1, rng);
        Dataset x1 = sample_elliptical(law, mu1, *chol, n1, rng);
        Dataset data(n, p);
        Index i0 = 0;
        Index i1 = 0;
        for (Index i = 0; i < n; ++i) {
            data.row(i) = labels[static_cast<std::size_t>(i)] == 1 ? x1.row(i1++) : x0.row(i0++);
        }
        return LabeledDataset{std::move(data), std::move(labels)};
    }
    throw std::runtime_error("gen_lda_data: could not draw both classes");
}

Index contamination_count(Index n, double r) {
    if (r < 0.0 || r >= 1.0) throw std::invalid_argument("contaminate: r must lie in [0, 1)");
    // guard against n*r landing a hair above an integer
    const double k = std::ceil(static_cast<double>(n) * r - 1e-9);
    return std::clamp<Index>(static_cast<Index>(k), 0, n);
}

Dataset contaminate(const Dataset& data, double r, double a, Rng& rng) {
    const Index n = data.rows();
    const Index k = contamination_count(n, r);
    Dataset out = data;
    if (k == 0) return out;
    std::vector<Index> rows(static_cast<std::size_t>(n));
    for (Index j = 0; j < data.cols(); ++j) {
        std::iota(rows.begin(), rows.end(), Index{0});
        // partial Fisher-Yates: the first k slots are a uniform k-subset
        for (Index t = 0; t < k; ++t) {
            const auto pick = t + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - t)));
            std::swap(rows[static_cast<std::size_t>(t)], rows[static_cast<std::size_t>(pick)]);
            out(rows[static_cast<std::size_t>(t)], j) = rng.bernoulli(0.5) ? a : -a;
        }
    }
    return out;
}

double sphere_moment(std::span<const int> exponents) {
    const auto p = static_cast<double>(exponents.size());
    if (exponents.empty()) throw std::invalid_argument("sphere_moment: need at least one exponent");
    int half_total = 0;
    double numerator = 1.0;
    for (int m : exponents) {
        if (m < 0) throw std::invalid_argument("sphere_moment: exponents must be nonnegative");
        if (m % 2 != 0) return 0.0;
        const int l = m / 2;
        half_total += l;
        // (2l)! / (4^l l!) = (2l-1)!! / 2^l
        double term = 1.0;
        for (int k = 1; k <= l; ++k) term *= (2.0 * k - 1.0) / 2.0;
        numerator *= term;
    }
    double rising = 1.0;
    for (int k = 0; k < half_total; ++k) rising *= p / 2.0 + k;
    return numerator / rising;
}

}  // namespace sscov
