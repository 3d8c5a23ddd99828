#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "rfcover/kernel_baseline.hpp"
#include "rfcover/scenario.hpp"
#include "support/finite_diff.hpp"

using namespace rfcover;

namespace {

Eigen::MatrixXd uniform_points(Eigen::Index n, std::uint64_t seed, double side = 10.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, side);
    Eigen::MatrixXd X(n, 2);
    for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = u(rng);
    return X;
}

}  // namespace

TEST_CASE("gram matrix: unit diagonal, symmetry and per-pair values") {
    const Eigen::MatrixXd X = uniform_points(5, 1, 3.0);
    const double sigma = 0.8;
    const Eigen::MatrixXd K = gram_matrix(X, KernelKind::Gaussian, sigma);
    REQUIRE(K.rows() == 5);
    for (Eigen::Index i = 0; i < 5; ++i) {
        CHECK(K(i, i) == 1.0);
        for (Eigen::Index j = 0; j < 5; ++j) {
            const double d2 = (X.row(i) - X.row(j)).squaredNorm();
            CHECK(K(i, j) == doctest::Approx(std::exp(-0.5 * sigma * sigma * d2)).epsilon(1e-13));
            CHECK(K(i, j) == K(j, i));
        }
    }
    const Eigen::MatrixXd L = gram_matrix(X, KernelKind::Laplacian, sigma);
    const Eigen::MatrixXd C = gram_matrix(X, KernelKind::Cauchy, sigma);
    CHECK((L - L.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((C - C.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) {
            const double a = std::abs(X(i, 0) - X(j, 0)), b = std::abs(X(i, 1) - X(j, 1));
            CHECK(L(i, j) == doctest::Approx(std::exp(-sigma * (a + b))));
            CHECK(C(i, j) == doctest::Approx(1.0 / ((1 + sigma * sigma * a * a) * (1 + sigma * sigma * b * b))));
        }
    }
}

TEST_CASE("cross gram agrees with the square gram on identical inputs") {
    const Eigen::MatrixXd X = uniform_points(12, 2);
    for (KernelKind kind : {KernelKind::Gaussian, KernelKind::Laplacian, KernelKind::Cauchy}) {
        const Eigen::MatrixXd K = gram_matrix(X, kind, 0.7);
        const Eigen::MatrixXd C = cross_gram(X, X, kind, 0.7);
        CHECK((K - C).cwiseAbs().maxCoeff() <= 1e-12);
    }
    const Eigen::MatrixXd B = uniform_points(4, 3);
    const Eigen::MatrixXd C = cross_gram(X, B, KernelKind::Gaussian, 0.7);
    CHECK(C.rows() == 12);
    CHECK(C.cols() == 4);
    CHECK(C(5, 2) == doctest::Approx(std::exp(-0.5 * 0.49 * (X.row(5) - B.row(2)).squaredNorm())));
}

TEST_CASE("gram matrix is positive semidefinite") {
    for (Eigen::Index n : {20, 80, 200}) {
        const Eigen::MatrixXd X = uniform_points(n, static_cast<std::uint64_t>(n));
        for (KernelKind kind : {KernelKind::Gaussian, KernelKind::Laplacian, KernelKind::Cauchy}) {
            const Eigen::MatrixXd K = gram_matrix(X, kind, 1.0) + 1e-9 * Eigen::MatrixXd::Identity(n, n);
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
            CHECK(es.eigenvalues().minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("random-feature gram approaches the exact gram") {
    const Eigen::MatrixXd X = uniform_points(50, 4, 4.0);
    const Eigen::MatrixXd K = gram_matrix(X, KernelKind::Gaussian, 1.0);
    const FeatureSet fs = sample_features(KernelKind::Gaussian, 1.0, 10000, 6);
    const Eigen::MatrixXd Z = transform(X, fs).Z;
    const double err = (Z * Z.transpose() - K).cwiseAbs().maxCoeff();
    MESSAGE("max |ZZ^T - K| at M=1e4: " << err);
    CHECK(err <= 0.05);
}

TEST_CASE("kernel objective gradient matches central differences") {
    const Eigen::MatrixXd X = uniform_points(40, 5, 4.0);
    const Eigen::MatrixXd K = gram_matrix(X, KernelKind::Gaussian, 1.2);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXd y(40);
    for (Eigen::Index i = 0; i < 40; ++i) y(i) = X(i, 0) > 2.0 ? 1.0 : -1.0;
    const KernelLogisticObjective obj(K, y, 1e-2);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd params(obj.parameter_count());
        for (Eigen::Index i = 0; i < params.size(); ++i) params(i) = g(rng);
        Eigen::VectorXd analytic;
        const double f = obj(params, analytic);
        CHECK(f == obj.value(params));
        const Eigen::VectorXd numeric =
            testing::central_difference([&obj](const Eigen::VectorXd& x) { return obj.value(x); }, params);
        CHECK(testing::max_relative_error(analytic, numeric) <= 1e-5);
    }
}

TEST_CASE("clean toy is fit exactly and the objective never increases") {
    const Eigen::MatrixXd X = uniform_points(30, 8, 4.0);
    Eigen::VectorXd y(30);
    for (Eigen::Index i = 0; i < 30; ++i) y(i) = (X.row(i) - Eigen::RowVector2d(2, 2)).norm() < 1.3 ? 1.0 : -1.0;
    REQUIRE((y.array() > 0).any());
    REQUIRE((y.array() < 0).any());
    const GramModel m = train_kernel_logistic(X, y, KernelKind::Gaussian, 1.5);
    const Eigen::VectorXd f = m.decision(X);
    for (Eigen::Index i = 0; i < 30; ++i) CHECK(f(i) * y(i) > 0.0);
    for (std::size_t k = 1; k < m.objective_trace.size(); ++k) CHECK(m.objective_trace[k] <= m.objective_trace[k - 1]);
    CHECK(m.objective_trace.front() == doctest::Approx(std::log(2.0)));
}

TEST_CASE("kernel one-vs-all on a small scenario") {
    ScenarioConfig c = ScenarioConfig::defaults();
    c.n_train = 400;
    c.n_test = 300;
    c.label_noise_rate = 0.0;
    const auto [train, test] = generate_scenario(c);
    const double sigma = sigma_heuristic(train, 20);
    const KernelMultiClassModel model =
        train_kernel_one_vs_all(train.locations(), train.labels(), KernelKind::Gaussian, sigma);
    const double acc = accuracy(model, test);
    MESSAGE("kernel one-vs-all accuracy " << acc);
    CHECK(acc >= 0.85);
    CHECK(model.predict(test.points[0].x) == model.predict(test.locations())[0]);
    for (std::size_t k = 0; k < 3; ++k) CHECK(model.models[k].task_class == kClassOrder[k]);
}

TEST_CASE("kernel baseline rejects bad input") {
    Eigen::MatrixXd X = uniform_points(6, 9);
    X(2, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(gram_matrix(X, KernelKind::Gaussian, 1.0), std::invalid_argument);
    const Eigen::MatrixXd ok = uniform_points(6, 9);
    CHECK_THROWS_AS(gram_matrix(ok, KernelKind::Gaussian, -1.0), std::invalid_argument);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(6);
    CHECK_THROWS_AS(train_kernel_logistic(ok, y, KernelKind::Gaussian, 1.0), std::invalid_argument);
    y(0) = -1.0;
    CHECK_THROWS_AS(train_kernel_logistic(ok, y.head(4), KernelKind::Gaussian, 1.0), std::invalid_argument);
}
