#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "hrl/discretize.hpp"
#include "hrl/errors.hpp"
#include "hrl/halfline.hpp"
#include "hrl/spectral.hpp"

using namespace hrl;

namespace {

Eigen::MatrixXd dense(const SymBandMatrix& a) {
    const auto d = a.to_dense();
    const auto n = static_cast<Eigen::Index>(a.size());
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(d.data(), n, n);
}

SymBandMatrix diag(std::vector<double> d) { return SymBandMatrix::diagonal(d); }

}  // namespace

TEST_CASE("negative_count examples") {
    const auto I = SymBandMatrix::identity(2);
    const auto Z = SymBandMatrix(2, 0);
    CHECK(negative_count(diag({1.0, 2.0}), Z, I) == 0);
    CHECK(negative_count(diag({-1.0, 2.0}), Z, I) == 1);
    CHECK(negative_count(diag({-1.0, 2.0}), Z, I, 3.0) == 2);
    // exact zero pivot at the shift: strict count
    CHECK(negative_count(diag({0.0, 1.0}), Z, I) == 0);
    CHECK(negative_count(diag({-1.0, 1.0}), Z, I, 1.0) == 1);
}

TEST_CASE("negative_eigenvalues on a diagonal pencil") {
    const auto r = negative_eigenvalues(diag({-4.0, -1.0, 3.0}), SymBandMatrix(3, 0), SymBandMatrix::identity(3));
    REQUIRE(r.count == 2);
    CHECK(r.negatives[0] == doctest::Approx(-4.0).epsilon(1e-10));
    CHECK(r.negatives[1] == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(r.with_gamma(0.5).riesz_mean == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("Hardy-critical operator without potential has no negative spectrum") {
    const auto mesh = build_mesh(0.0, 5.0, 256, 1.02);
    const auto sys = assemble(FormSpec::bilaplacian_hardy(critical_hardy()), mesh, BoundaryCondition::clamped_both);
    CHECK(negative_eigenvalues(sys.K, sys.M_V, sys.M).count == 0);
}

TEST_CASE("riesz_mean") {
    const std::vector<double> v{-4.0, -1.0};
    CHECK(riesz_mean(v, 0.5) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(riesz_mean(v, 1.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(riesz_mean(std::vector<double>{}, 2.0) == 0.0);
    CHECK(riesz_mean(v, 0.0) == 2.0);
}

TEST_CASE("banded solver against the dense oracle") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> dim(5, 200);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = dim(rng);
        SymBandMatrix k(n, 3), mv(n, 3), m(n, 3);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i >= 3 ? i - 3 : 0; j <= i; ++j) {
                k.at(i, j) = N(rng);
                m.at(i, j) = 0.1 * N(rng);
            }
            k.at(i, i) += 2.0;
            m.at(i, i) += 2.0;
            mv.at(i, i) = std::abs(N(rng));
        }
        const auto a = k.plus(mv, -1.0);
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(a), dense(m), Eigen::EigenvaluesOnly);
        std::vector<double> oracle;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (es.eigenvalues()(i) < 0.0) oracle.push_back(es.eigenvalues()(i));
        }
        const auto r = negative_eigenvalues(k, mv, m, 1e-12);
        REQUIRE(r.count == oracle.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) {
            CHECK(r.negatives[i] == doctest::Approx(oracle[i]).epsilon(1e-8));
        }
        const auto dg = dense_generalized_eigenvalues(a, m);
        for (std::size_t i = 0; i < oracle.size(); ++i) CHECK(dg[i] == doctest::Approx(oracle[i]).epsilon(1e-10));
    }
}

TEST_CASE("inertia and bisection agree") {
    const auto v = Potential::step(1.0, 2.0, 200.0);
    const auto mesh = build_mesh(0.0, 5.0, 256, 1.02);
    const auto sys = assemble(FormSpec::bilaplacian_hardy(critical_hardy()), mesh, BoundaryCondition::clamped_both, v);
    const double tol = 1e-10;
    const auto r = negative_eigenvalues(sys.K, sys.M_V, sys.M, tol);
    REQUIRE(r.count >= 2);
    for (double lam : r.negatives) {
        const double w = 2.0 * tol * std::max(1.0, std::abs(lam));
        CHECK(negative_count(sys.K, sys.M_V, sys.M, lam + w) - negative_count(sys.K, sys.M_V, sys.M, lam - w) == 1);
    }
}

TEST_CASE("counts are monotone in the potential") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto mesh = build_mesh(0.0, 6.0, 192, 1.02);
    for (int t = 0; t < 15; ++t) {
        const double lo = 0.5 + 1.5 * U(rng);
        const double hi = lo + 0.3 + 1.5 * U(rng);
        const double h = 20.0 + 300.0 * U(rng);
        const auto v1 = Potential::bump(lo, hi, h, 0.3);
        const auto v2 = Potential::composite({v1, Potential::step(lo, hi, 50.0 * U(rng))});
        const auto s1 = assemble(FormSpec::bilaplacian_hardy(critical_hardy()), mesh, BoundaryCondition::clamped_both, v1);
        const auto s2 = assemble(FormSpec::bilaplacian_hardy(critical_hardy()), mesh, BoundaryCondition::clamped_both, v2);
        CHECK(negative_count(s2.K, s2.M_V, s2.M) >= negative_count(s1.K, s1.M_V, s1.M));
    }
}

TEST_CASE("constrained_min_rayleigh") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> N(0.0, 1.0);
    const std::size_t n = 40;
    SymBandMatrix k(n, 3), m(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i >= 3 ? i - 3 : 0; j <= i; ++j) {
            k.at(i, j) = N(rng);
            m.at(i, j) = 0.1 * N(rng);
        }
        k.at(i, i) += 1.0;
        m.at(i, i) += 2.0;
    }
    CHECK(constrained_min_rayleigh(m, m) == doctest::Approx(1.0).epsilon(1e-12));

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(k), dense(m), Eigen::EigenvaluesOnly);
    CHECK(constrained_min_rayleigh(k, m) == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));

    std::vector<std::vector<double>> cons(3, std::vector<double>(n));
    Eigen::MatrixXd C(3, static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            cons[r][i] = N(rng);
            C(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = cons[r][i];
        }
    }
    const Eigen::MatrixXd Z = C.fullPivLu().kernel();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ep(Z.transpose() * dense(k) * Z,
                                                                  Z.transpose() * dense(m) * Z, Eigen::EigenvaluesOnly);
    CHECK(constrained_min_rayleigh(k, m, cons) == doctest::Approx(ep.eigenvalues()(0)).epsilon(1e-9));
    CHECK(constrained_min_rayleigh(k, m, cons) >= es.eigenvalues()(0) - 1e-12);

    // M_target vanishes on the feasible set
    std::vector<double> md{1.0, 0.0, 0.0};
    std::vector<std::vector<double>> pin{{1.0, 0.0, 0.0}};
    CHECK_THROWS_AS(constrained_min_rayleigh(SymBandMatrix::identity(3), SymBandMatrix::diagonal(md), pin), DomainError);
}
