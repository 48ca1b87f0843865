#include <doctest.h>

#include <random>

#include <Eigen/Dense>

#include "hrl/band_matrix.hpp"
#include "hrl/errors.hpp"

using namespace hrl;

namespace {

SymBandMatrix random_band(std::size_t n, std::size_t kd, std::mt19937_64& rng, double diag_shift = 0.0) {
    std::normal_distribution<double> N(0.0, 1.0);
    SymBandMatrix a(n, kd);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i >= kd ? i - kd : 0; j <= i; ++j) a.at(i, j) = N(rng);
        a.at(i, i) += diag_shift;
    }
    return a;
}

Eigen::MatrixXd dense(const SymBandMatrix& a) {
    const auto d = a.to_dense();
    const auto n = static_cast<Eigen::Index>(a.size());
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.data(), n, n);
}

}  // namespace

TEST_CASE("storage is symmetric and band limited") {
    SymBandMatrix a(5, 2);
    a.at(3, 1) = 7.0;
    CHECK(a(3, 1) == 7.0);
    CHECK(a(1, 3) == 7.0);
    CHECK(a(4, 0) == 0.0);
    CHECK_FALSE(a.in_band(4, 0));
    a.at(1, 3) += 1.0;
    CHECK(a(3, 1) == 8.0);
}

TEST_CASE("multiply, form and plus agree with dense algebra") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const auto a = random_band(30, 3, rng);
        const auto b = random_band(30, 1, rng);
        std::vector<double> x(30), y(30);
        for (auto& v : x) v = N(rng);
        for (auto& v : y) v = N(rng);
        const Eigen::Map<Eigen::VectorXd> ex(x.data(), 30), ey(y.data(), 30);
        const auto ax = a.multiply(x);
        const Eigen::VectorXd oracle = dense(a) * ex;
        for (int i = 0; i < 30; ++i) CHECK(ax[static_cast<std::size_t>(i)] == doctest::Approx(oracle(i)).epsilon(1e-13));
        CHECK(a.form(x, y) == doctest::Approx(ex.dot(dense(a) * ey)).epsilon(1e-12));
        const auto c = a.plus(b, -2.5);
        CHECK((dense(c) - (dense(a) - 2.5 * dense(b))).cwiseAbs().maxCoeff() < 1e-14);
        const auto tr = a.trimmed(2, 1);
        CHECK((dense(tr) - dense(a).block(2, 2, 27, 27)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("LDLT inertia matches dense eigenvalue signs") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 10 + static_cast<std::size_t>(t) * 3;
        const auto a = random_band(n, 3, rng, 0.3);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a));
        std::size_t neg = 0;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) neg += es.eigenvalues()(i) < 0.0;
        const auto r = ldlt_inertia(a);
        REQUIRE(r.ok);
        CHECK(r.inertia.negative == neg);
        CHECK(r.inertia.negative + r.inertia.zero + r.inertia.positive == n);
    }
}

TEST_CASE("zero pivot is reported") {
    SymBandMatrix a(3, 1);
    a.at(0, 0) = 0.0;
    a.at(1, 0) = 1.0;
    a.at(1, 1) = 1.0;
    a.at(2, 2) = 1.0;
    CHECK_FALSE(ldlt_inertia(a).ok);
}

TEST_CASE("banded Cholesky solve") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0.0, 1.0);
    const std::size_t n = 60;
    auto a = random_band(n, 3, rng);
    a = a.plus(SymBandMatrix::identity(n), 12.0);
    std::vector<double> b(n);
    for (auto& v : b) v = N(rng);
    const auto x = cholesky_solve(a, b);
    const Eigen::VectorXd oracle = dense(a).ldlt().solve(Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(n)));
    for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(oracle(static_cast<Eigen::Index>(i))).epsilon(1e-11));
    CHECK_THROWS_AS(cholesky_solve(SymBandMatrix::identity(4).scaled(-1.0), std::vector<double>(4, 1.0)),
                    NumericalFailure);
}

TEST_CASE("is_psd") {
    CHECK(is_psd(SymBandMatrix::identity(5)));
    std::vector<double> d{1.0, 2.0, -1e-3};
    CHECK_FALSE(is_psd(SymBandMatrix::diagonal(d)));
    std::vector<double> z{1.0, 0.0, 3.0};
    CHECK(is_psd(SymBandMatrix::diagonal(z)));
}
