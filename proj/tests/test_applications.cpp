#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

#include "sscov/applications.hpp"

#include <cmath>

using namespace sscov;
using testing::max_abs_diff;

namespace {

double cosine(const Vector& a, const Vector& b) { return a.dot(b) / (a.norm() * b.norm()); }

}  // namespace

TEST_CASE("recovery rates") {
    const auto truth = gen_model3(6, 0.6);
    auto r = recovery_rates(truth.omega, 1e-5, truth.edges);
    CHECK(*r.tpr == 1.0);
    CHECK(*r.fpr == 0.0);

    r = recovery_rates(SymmetricMatrix(6), 1e-5, truth.edges);
    CHECK(*r.tpr == 0.0);
    CHECK(*r.fpr == 0.0);

    Matrix dense = Matrix::Constant(6, 6, 0.3);
    r = recovery_rates(SymmetricMatrix::from_matrix(dense), 1e-5, truth.edges);
    CHECK(*r.tpr == 1.0);
    CHECK(*r.fpr == 1.0);

    // one of 5 edges lost, one of 10 non-edges gained
    Matrix m = truth.omega.matrix();
    m(0, 1) = m(1, 0) = 0.0;
    m(0, 5) = m(5, 0) = 0.2;
    r = recovery_rates(SymmetricMatrix::from_matrix(m), 1e-5, truth.edges);
    CHECK(*r.tpr == doctest::Approx(0.8));
    CHECK(*r.fpr == doctest::Approx(0.1));

    r = recovery_rates(SymmetricMatrix::identity(3), 1e-5, {});
    CHECK_FALSE(r.tpr);
    CHECK(*r.fpr == 0.0);

    const std::vector<Edge> all{{0, 1}, {0, 2}, {1, 2}};
    r = recovery_rates(SymmetricMatrix::identity(3), 1e-5, all);
    CHECK_FALSE(r.fpr);
    CHECK(*r.tpr == 0.0);
}

TEST_CASE("recovery rates are permutation invariant") {
    Rng rng(1);
    for (int t = 0; t < 10; ++t) {
        const auto truth = gen_geometric_graph_model(20, 4, 0.145, rng);
        const Matrix est = truth.omega.matrix() + testing::random_symmetric(20, rng).matrix() * 0.05;
        const double tau = 0.06;
        const auto r = recovery_rates(SymmetricMatrix::from_lower(est), tau, truth.edges);

        const Matrix perm = testing::permutation(20, rng);
        const Matrix pt = perm * truth.omega.matrix() * perm.transpose();
        const Matrix pe = perm * est * perm.transpose();
        const auto edges = offdiagonal_support(pt);
        const auto rp = recovery_rates(SymmetricMatrix::from_lower(pe), tau, edges);
        CHECK(*rp.tpr == doctest::Approx(*r.tpr).epsilon(1e-15));
        CHECK(*rp.fpr == doctest::Approx(*r.fpr).epsilon(1e-15));
        CHECK(*r.tpr >= 0.0);
        CHECK(*r.tpr <= 1.0);
    }
}

TEST_CASE("ROC path") {
    Rng rng(2);
    const auto truth = gen_geometric_graph_model(15, 4, 0.145, rng);
    const auto x = sample_elliptical(NormalLaw{}, Vector::Zero(15), truth.sigma, 200, rng);
    auto grid = lambda_grid(0.01, 1.0, 8);
    grid.values.push_back(1.5);
    for (Method method : {Method::SCLIME, Method::CLIME, Method::SGLASSO, Method::GLASSO}) {
        const auto path = roc_path(x, truth, method, grid, 1e-5, {});
        REQUIRE(path.size() == grid.values.size());
        for (std::size_t k = 0; k < path.size(); ++k) {
            CHECK(path[k].lambda == grid.values[k]);
            CHECK(*path[k].tpr >= 0.0);
            CHECK(*path[k].tpr <= 1.0);
            CHECK(*path[k].fpr >= 0.0);
            CHECK(*path[k].fpr <= 1.0);
        }
        if (is_clime_type(method)) {
            CHECK(*path.back().tpr == 0.0);
            CHECK(*path.back().fpr == 0.0);
        }
        // the smallest lambda recovers at least as many edges as the largest
        CHECK(*path.front().tpr >= *path.back().tpr);
    }
    // a model without edges traces only the false positive rate
    const auto empty = gen_model1(5, 0.0);
    const auto x0 = sample_elliptical(NormalLaw{}, Vector::Zero(5), empty.sigma, 50, rng);
    const auto path = roc_path(x0, empty, Method::SCLIME, lambda_grid(0.05, 0.5, 3), 1e-5, {});
    for (const auto& pt : path) {
        CHECK_FALSE(pt.tpr);
        CHECK(pt.fpr);
    }
}

TEST_CASE("sign consistency") {
    const auto truth = gen_model3(6, 0.6);
    const double theta = *sign_support(truth.omega).theta_min;
    CHECK(sign_consistency_check(truth.omega, 0.5 * theta, truth.omega));

    Matrix flipped = truth.omega.matrix();
    flipped(1, 2) = flipped(2, 1) = -flipped(1, 2);
    CHECK_FALSE(sign_consistency_check(SymmetricMatrix::from_matrix(flipped), 0.5 * theta, truth.omega));

    Matrix bumped = truth.omega.matrix();
    bumped(0, 4) = bumped(4, 0) = 0.4 * theta;
    CHECK(sign_consistency_check(SymmetricMatrix::from_matrix(bumped), 0.5 * theta, truth.omega));
    CHECK_FALSE(sign_consistency_check(SymmetricMatrix::from_matrix(bumped), 0.3 * theta, truth.omega));

    CHECK_THROWS_AS(sign_consistency_check(SymmetricMatrix::identity(2), 0.1, truth.omega),
                    std::invalid_argument);
}

TEST_CASE("LDA direction with identity covariance") {
    Rng rng(3);
    const Index p = 6;
    const Index n = 4000;
    const auto id = SymmetricMatrix::identity(p);
    Vector mu1 = Vector::Zero(p);
    mu1(0) = 2.0;
    const Matrix x0 = sample_elliptical(NormalLaw{}, Vector::Zero(p), id, n, rng);
    const Matrix x1 = sample_elliptical(NormalLaw{}, mu1, id, n, rng);
    Vector e1 = Vector::Zero(p);
    e1(0) = 1.0;
    for (Method method : {Method::SCLIME, Method::SGLASSO, Method::CLIME, Method::GLASSO}) {
        const auto rule = lda_fit(x0, x1, method, 0.05, {});
        CHECK(rule.w.allFinite());
        CHECK(rule.anchor.allFinite());
        CHECK(cosine(rule.w, e1) >= 0.99);
        CHECK(rule.anchor(0) == doctest::Approx(1.0).epsilon(0.1));
    }

    SUBCASE("rotation equivariance") {
        const Matrix q = testing::random_rotation(p, rng);
        for (Method method : {Method::CLIME, Method::GLASSO}) {
            SolverConfig tight;
            tight.tol_primal = 1e-10;
            tight.inner_tol = 1e-12;
            tight.max_iter = 100000;
            // lambda = 0 so the estimate is the exact inverse, which is equivariant
            const auto a = lda_fit(x0, x1, method, 0.0, tight);
            const auto b = lda_fit(x0 * q.transpose(), x1 * q.transpose(), method, 0.0, tight);
            CHECK(max_abs_diff(b.w, q * a.w) <= 1e-6);
            CHECK(max_abs_diff(b.anchor, q * a.anchor) <= 1e-10);
        }
    }
}

TEST_CASE("identical classes give a zero direction") {
    Rng rng(4);
    const Matrix x = testing::random_matrix(30, 3, rng);
    for (Method method : {Method::SCLIME, Method::CLIME}) {
        const auto rule = lda_fit(x, x, method, 0.1, {});
        CHECK(rule.w == Vector::Zero(3));
        for (int v : lda_predict(rule, x)) CHECK(v == 0);
    }
    CHECK_THROWS_AS(lda_fit(Matrix(0, 3), x, Method::CLIME, 0.1, {}), std::invalid_argument);
}

TEST_CASE("LDA prediction") {
    LdaRule rule{Vector::Unit(2, 0), Vector::Zero(2), Method::SCLIME, 0.1, true};
    const Vector e1 = Vector::Unit(2, 0);
    const Vector e2 = Vector::Unit(2, 1);
    CHECK(lda_predict(rule, e1) == 1);
    CHECK(lda_predict(rule, Vector(Vector::Zero(2))) == 0);
    CHECK(lda_predict(rule, e2) == 0);
    rule.w.setZero();
    CHECK(lda_predict(rule, e1) == 0);

    Rng rng(5);
    const Matrix x = testing::random_matrix(200, 4, rng);
    LdaRule r{testing::random_matrix(4, 1, rng), testing::random_matrix(4, 1, rng), Method::CLIME, 0.1, true};
    const auto base = lda_predict(r, x);
    for (double c : {1e-6, 0.3, 1.0, 7.0, 1e6}) {
        LdaRule scaled = r;
        scaled.w *= c;
        CHECK(lda_predict(scaled, x) == base);
    }
    for (Index i = 0; i < x.rows(); ++i)
        CHECK(lda_predict(r, Vector(x.row(i).transpose())) == base[static_cast<std::size_t>(i)]);
}

TEST_CASE("classification metrics") {
    std::vector<int> truth(100), pred(100);
    for (int i = 0; i < 100; ++i) truth[static_cast<std::size_t>(i)] = i < 50;
    auto r = classification_metrics(truth, truth);
    CHECK(r.specificity == 1.0);
    CHECK(r.sensitivity == 1.0);
    CHECK(r.mcc == 1.0);
    CHECK(r.misclassification == 0.0);

    std::fill(pred.begin(), pred.end(), 1);
    r = classification_metrics(truth, pred);
    CHECK(r.sensitivity == 1.0);
    CHECK(r.specificity == 0.0);
    CHECK(r.mcc == 0.0);

    // TP=40, TN=45, FP=5, FN=10
    truth.clear();
    pred.clear();
    auto push = [&](int t, int p, int k) {
        for (int i = 0; i < k; ++i) {
            truth.push_back(t);
            pred.push_back(p);
        }
    };
    push(1, 1, 40);
    push(0, 0, 45);
    push(0, 1, 5);
    push(1, 0, 10);
    r = classification_metrics(truth, pred);
    CHECK(r.tp == 40);
    CHECK(r.tn == 45);
    CHECK(r.fp == 5);
    CHECK(r.fn == 10);
    CHECK(r.specificity == doctest::Approx(0.9));
    CHECK(r.sensitivity == doctest::Approx(0.8));
    CHECK(r.mcc == doctest::Approx(0.7035264706814484).epsilon(1e-14));
    CHECK(r.misclassification == doctest::Approx(0.15));
    CHECK(misclassification_rate(truth, pred) == r.misclassification);

    CHECK_THROWS_AS(classification_metrics(std::vector<int>{1}, std::vector<int>{}), std::invalid_argument);
}

TEST_CASE("classification metrics on random labels") {
    Rng rng(6);
    for (int t = 0; t < 50; ++t) {
        const auto n = 1 + static_cast<std::size_t>(rng.below(80));
        std::vector<int> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.bernoulli(0.5);
            b[i] = rng.bernoulli(0.5);
        }
        const auto r = classification_metrics(a, b);
        CHECK(r.tp + r.tn + r.fp + r.fn == static_cast<long>(n));
        CHECK(r.misclassification == static_cast<double>(r.fp + r.fn) / static_cast<double>(n));
        CHECK(r.specificity >= 0.0);
        CHECK(r.specificity <= 1.0);
        CHECK(r.sensitivity >= 0.0);
        CHECK(r.sensitivity <= 1.0);
        CHECK(r.mcc >= -1.0 - 1e-12);
        CHECK(r.mcc <= 1.0 + 1e-12);
        if (r.tn + r.fp > 0) CHECK(r.specificity == static_cast<double>(r.tn) / static_cast<double>(r.tn + r.fp));
        if (r.tp + r.fn > 0) CHECK(r.sensitivity == static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn));
    }
}
