#include "sscov/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sscov {

std::string to_string(Method m) {
    switch (m) {
        case Method::SCLIME: return "SCLIME";
        case Method::SGLASSO: return "SGLASSO";
        case Method::CLIME: return "CLIME";
        case Method::GLASSO: return "GLASSO";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    std::string up;
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "SCLIME") return Method::SCLIME;
    if (up == "SGLASSO") return Method::SGLASSO;
    if (up == "CLIME") return Method::CLIME;
    if (up == "GLASSO") return Method::GLASSO;
    throw std::invalid_argument("unknown method '" + name + "'");
}

bool is_spatial(Method m) noexcept { return m == Method::SCLIME || m == Method::SGLASSO; }
bool is_clime_type(Method m) noexcept { return m == Method::SCLIME || m == Method::CLIME; }

void SolverConfig::validate() const {
    if (!(tol_primal > 0.0) || !(tol_dual > 0.0) || !(inner_tol > 0.0)) {
        throw std::invalid_argument("SolverConfig: tolerances must be positive");
    }
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    if (!(admm_step > 0.0)) throw std::invalid_argument("SolverConfig: admm_step must be positive");
}

bool ClimeColumns::converged() const {
    return std::all_of(column_converged.begin(), column_converged.end(), [](bool c) { return c; });
}

namespace {

void check_lambda(double lambda, const char* who) {
    if (!(lambda >= 0.0)) throw std::invalid_argument(std::string(who) + ": lambda must be >= 0");
}

// Gathers the listed columns of `src` into a dense block.
Matrix gather(const Matrix& src, const std::vector<Index>& cols) {
    Matrix out(src.rows(), static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Index>(k)) = src.col(cols[k]);
    return out;
}

}  // namespace

ClimeColumns clime_columns_admm(const SymmetricMatrix& msym, double lambda, const SolverConfig& cfg) {
    check_lambda(lambda, "sclime");
    cfg.validate();
    const Matrix& m = msym.matrix();
    const Index p = m.rows();
    const double opn = norm_operator(m);
    const double rho = cfg.admm_step;
    // mu must dominate |M|^2 for the linearized step to be a majorizer.
    const double mu = std::max(1.01 * opn * opn, 1e-12);
    const double shrink = 1.0 / (mu * rho);

    ClimeColumns out;
    out.beta = Matrix::Zero(p, p);
    out.column_converged.assign(static_cast<std::size_t>(p), false);

    const Matrix eye = Matrix::Identity(p, p);
    std::vector<Index> active(static_cast<std::size_t>(p));
    std::iota(active.begin(), active.end(), Index{0});

    Matrix b = out.beta;
    Matrix z = eye.array().min(lambda).matrix();
    Matrix u = Matrix::Zero(p, p);
    Matrix target = eye;
    Matrix mb = m * b;

    int it = 0;
    while (!active.empty() && it < cfg.max_iter) {
        ++it;
        const Matrix grad = m * (mb - z + u);
        Matrix b_next = (b - grad / mu).unaryExpr([shrink](double x) { return soft_threshold(x, shrink); });
        Matrix mb_next = m * b_next;
        Matrix z_next = ((mb_next + u).array().max(target.array() - lambda))
                            .min(target.array() + lambda)
                            .matrix();
        const Matrix primal = mb_next - z_next;
        u += primal;

        const auto k = static_cast<Index>(active.size());
        std::vector<Index> keep;
        keep.reserve(active.size());
        for (Index c = 0; c < k; ++c) {
            const double r_primal = primal.col(c).cwiseAbs().maxCoeff();
            const double r_dual =
                rho * std::max(mu * (b_next.col(c) - b.col(c)).cwiseAbs().maxCoeff(),
                               opn * (z_next.col(c) - z.col(c)).cwiseAbs().maxCoeff());
            const Index j = active[static_cast<std::size_t>(c)];
            if (r_primal <= cfg.tol_primal && r_dual <= cfg.tol_dual) {
                out.beta.col(j) = b_next.col(c);
                out.column_converged[static_cast<std::size_t>(j)] = true;
            } else {
                keep.push_back(c);
            }
        }

        if (static_cast<Index>(keep.size()) == k) {
            b = std::move(b_next);
            z = std::move(z_next);
            mb = std::move(mb_next);
        } else {
            std::vector<Index> next_active;
            next_active.reserve(keep.size());
            for (Index c : keep) next_active.push_back(active[static_cast<std::size_t>(c)]);
            b = gather(b_next, keep);
            z = gather(z_next, keep);
            u = gather(u, keep);
            mb = gather(mb_next, keep);
            target = gather(eye, next_active);
            active = std::move(next_active);
        }
    }
    // columns that hit the cap keep their last iterate
    for (std::size_t c = 0; c < active.size(); ++c) {
        const Index j = active[c];
        out.beta.col(j) = b.col(static_cast<Index>(c));
    }
    out.iterations = it;
    return out;
}

SymmetricMatrix symmetrize_min(const Matrix& v1) {
    if (v1.rows() != v1.cols()) throw std::invalid_argument("symmetrize_min: matrix must be square");
    Matrix out = v1;
    for (Index j = 0; j < v1.cols(); ++j) {
        for (Index i = 0; i < j; ++i) {
            const double upper = v1(i, j);
            const double lower = v1(j, i);
            const double pick = std::abs(upper) <= std::abs(lower) ? upper : lower;
            out(i, j) = pick;
            out(j, i) = pick;
        }
    }
    return SymmetricMatrix::from_matrix(std::move(out));
}

namespace {

PrecisionEstimate finish_clime(const ClimeColumns& cols, double lambda, Method tag) {
    auto v = symmetrize_min(cols.beta);
    const bool pd = cholesky(v).has_value();
    return PrecisionEstimate{std::move(v), tag, lambda, cols.converged(), pd, cols.iterations};
}

}  // namespace

PrecisionEstimate sclime(const SymmetricMatrix& m, double lambda, const SolverConfig& cfg, Method tag) {
    return finish_clime(clime_columns(m, lambda, cfg), lambda, tag);
}

GlassoState glasso_solve(const SymmetricMatrix& msym, double lambda, const SolverConfig& cfg,
                         const GlassoState* warm) {
    check_lambda(lambda, "sglasso");
    cfg.validate();
    const Matrix& m = msym.matrix();
    const Index p = m.rows();
    for (Index i = 0; i < p; ++i) {
        if (!(m(i, i) > 0.0)) throw std::invalid_argument("sglasso: M must have a positive diagonal");
    }

    GlassoState st;
    if (warm && warm->w.rows() == p) {
        st.w = warm->w;
        st.b = warm->b;
    } else {
        st.w = m;
        st.b = Matrix::Zero(p, p);
    }
    st.w.diagonal() = m.diagonal().array() + lambda;

    double off_mean = 0.0;
    if (p > 1) off_mean = (m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum()) /
                          static_cast<double>(p * (p - 1));
    const double threshold = cfg.tol_primal * (off_mean > 0.0 ? off_mean : 1.0);

    Vector wb(p);
    Matrix& w = st.w;
    for (int sweep = 1; sweep <= cfg.max_iter && p > 1; ++sweep) {
        double change = 0.0;
        for (Index j = 0; j < p; ++j) {
            auto beta = st.b.col(j);
            beta(j) = 0.0;
            wb.noalias() = w * beta;  // W11 beta, entry j ignored

            // coordinate descent on 0.5 b'W11 b - s12'b + lambda |b|_1
            for (int pass = 0; pass < cfg.max_iter; ++pass) {
                double max_delta = 0.0;
                for (Index k = 0; k < p; ++k) {
                    if (k == j) continue;
                    const double old = beta(k);
                    const double wkk = w(k, k);
                    const double g = m(k, j) - (wb(k) - wkk * old);
                    const double next = soft_threshold(g, lambda) / wkk;
                    const double delta = next - old;
                    if (delta != 0.0) {
                        wb.noalias() += delta * w.col(k);
                        beta(k) = next;
                        max_delta = std::max(max_delta, std::abs(delta) * wkk);
                    }
                }
                if (max_delta < cfg.inner_tol) break;
            }

            for (Index k = 0; k < p; ++k) {
                if (k == j) continue;
                change += std::abs(w(k, j) - wb(k));
                w(k, j) = wb(k);
                w(j, k) = wb(k);
            }
        }
        st.sweeps = sweep;
        if (change / static_cast<double>(p * (p - 1)) <= threshold) {
            st.converged = true;
            break;
        }
    }
    if (p == 1) st.converged = true;
    return st;
}

SymmetricMatrix glasso_precision(const GlassoState& st) {
    const Index p = st.w.rows();
    Matrix v = Matrix::Zero(p, p);
    for (Index j = 0; j < p; ++j) {
        double cross = 0.0;
        for (Index k = 0; k < p; ++k)
            if (k != j) cross += st.w(k, j) * st.b(k, j);
        const double vjj = 1.0 / (st.w(j, j) - cross);
        v(j, j) = vjj;
        for (Index k = 0; k < p; ++k)
            if (k != j) v(k, j) = -st.b(k, j) * vjj;
    }
    Matrix sym = 0.5 * (v + v.transpose());
    return SymmetricMatrix::from_lower(std::move(sym));
}

namespace {

PrecisionEstimate finish_glasso(const GlassoState& st, double lambda, Method tag) {
    auto v = glasso_precision(st);
    const bool pd = cholesky(v).has_value();
    return PrecisionEstimate{std::move(v), tag, lambda, st.converged, pd, st.sweeps};
}

}  // namespace

PrecisionEstimate sglasso(const SymmetricMatrix& m, double lambda, const SolverConfig& cfg, Method tag) {
    return finish_glasso(glasso_solve(m, lambda, cfg), lambda, tag);
}

PrecisionEstimate estimate(Method method, const SymmetricMatrix& m, double lambda,
                           const SolverConfig& cfg) {
    return is_clime_type(method) ? sclime(m, lambda, cfg, method) : sglasso(m, lambda, cfg, method);
}

std::vector<PrecisionEstimate> fit_path(Method method, const SymmetricMatrix& m,
                                        std::span<const double> lambdas, const SolverConfig& cfg,
                                        bool warm_start) {
    std::vector<std::size_t> order(lambdas.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return lambdas[a] > lambdas[b]; });

    std::vector<std::optional<PrecisionEstimate>> slots(lambdas.size());
    if (is_clime_type(method)) {
        if (warm_start) {
            std::vector<double> desc;
            for (std::size_t idx : order) desc.push_back(lambdas[idx]);
            auto path = clime_path(m, desc, cfg);
            for (std::size_t k = 0; k < order.size(); ++k) {
                slots[order[k]] = finish_clime(path[k], desc[k], method);
            }
        } else {
            for (std::size_t idx : order) {
                slots[idx] = finish_clime(clime_columns(m, lambdas[idx], cfg), lambdas[idx], method);
            }
        }
    } else {
        std::optional<GlassoState> prev;
        for (std::size_t idx : order) {
            auto st = glasso_solve(m, lambdas[idx], cfg, (warm_start && prev) ? &*prev : nullptr);
            slots[idx] = finish_glasso(st, lambdas[idx], method);
            prev = std::move(st);
        }
    }
    std::vector<PrecisionEstimate> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

SymmetricMatrix threshold_estimate(const SymmetricMatrix& v, double tau) {
    if (!(tau >= 0.0)) throw std::invalid_argument("threshold_estimate: tau must be >= 0");
    Matrix out = v.matrix();
    for (Index j = 0; j < out.cols(); ++j)
        for (Index i = 0; i < out.rows(); ++i)
            if (std::abs(out(i, j)) < tau) out(i, j) = 0.0;
    return SymmetricMatrix::from_matrix(std::move(out));
}

SignSupport sign_support(const SymmetricMatrix& v) {
    const Index p = v.dim();
    SignSupport s;
    s.signs = Eigen::MatrixXi::Zero(p, p);
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < p; ++i) {
            const double x = v(i, j);
            if (x == 0.0) continue;
            s.signs(i, j) = x > 0.0 ? 1 : -1;
            s.support.emplace_back(i, j);
            const double a = std::abs(x);
            if (!s.theta_min || a < *s.theta_min) s.theta_min = a;
        }
    }
    return s;
}

}  // namespace sscov
