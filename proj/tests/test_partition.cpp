#include <doctest.h>

#include <cmath>
#include <random>

#include "hrl/errors.hpp"
#include "hrl/halfline.hpp"
#include "hrl/partition.hpp"
#include "hrl/spectral.hpp"

using namespace hrl;

namespace {

Potential random_potential(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double lo = 0.2 + 2.0 * U(rng);
    const double hi = lo + 0.5 + 3.0 * U(rng);
    switch (rng() % 3) {
        case 0: return Potential::step(lo, hi, 1.0 + 50.0 * U(rng));
        case 1: return Potential::bump(lo, hi, 5.0 + 200.0 * U(rng), 0.1 + U(rng));
        default:
            return Potential::piecewise_linear(
                {{lo, 0.0}, {0.5 * (lo + hi), 1.0 + 40.0 * U(rng)}, {hi, 0.0}});
    }
}

}  // namespace

TEST_CASE("step example") {
    const auto v = Potential::step(1.0, 2.0, 16.0);
    const auto p = compute_partition(v, 0.0, 1.0);
    const std::vector<double> expect{0.0, 1.0, 1.5, 2.0};
    REQUIRE(p.a.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(std::abs(p.a[i] - expect[i]) <= 1e-10);
    CHECK(p.min_step == doctest::Approx(std::pow(1.0 / 16.0, 1.0 / 3.0)).epsilon(1e-12));
    for (std::size_t j = 1; j + 1 < p.a.size(); ++j) CHECK(p.a[j + 1] - p.a[j] >= p.min_step);
    CHECK(partition_defect(v, p) == 0.0);
    REQUIRE(p.rescaled.size() == 2);
    CHECK(p.rescaled[0].b == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(p.rescaled[0].budget == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.rescaled[1].budget == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("budget larger than the mass exits the support") {
    const auto v = Potential::step(1.0, 2.0, 1.0);
    const auto p = compute_partition(v, 0.0, 2.0);
    REQUIRE(p.a.size() == 3);
    CHECK(p.a[1] == 1.0);
    CHECK(p.a[2] >= 2.0);
    CHECK(p.a[2] == doctest::Approx(1.0 + std::cbrt(2.0)).epsilon(1e-12));
}

TEST_CASE("rescaling") {
    const auto v = Potential::step(1.0, 2.0, 16.0);
    const auto r = rescale_interval(v, 1.0, 1.5, 0.0);
    CHECK(r.b == doctest::Approx(2.0));
    for (double x : {2.1, 2.5, 2.9}) CHECK(r.v(x) == doctest::Approx(v(0.5 * x) / 16.0));
    CHECK(r.budget == doctest::Approx(1.0).epsilon(1e-9));
    for (double nu : {0.0, 1.0, 2.0}) {
        const auto w = Potential::bump(1.0, 3.0, 40.0, 0.5);
        const auto q = rescale_interval(w, 1.2, 1.9, nu);
        const double direct = std::pow(0.7, 3.0 - nu) * weighted_moment(w, 1.0, nu, 1.2, 1.9);
        CHECK(q.budget == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("eigenvalues transform covariantly under rescaling") {
    const auto v = Potential::bump(1.0, 3.0, 400.0, 0.4);
    const double a0 = 1.3, a1 = 2.1, L = a1 - a0;
    const double alpha = identity_alpha(), beta = 1.5;
    const auto r = rescale_interval(v, a0, a1, 0.0);
    const auto mesh = build_mesh(a0, a1, 96, 1.0);
    const auto g = assemble(FormSpec::general(alpha, beta), mesh, BoundaryCondition::free, v.restricted(a0, a1));
    const auto h = assemble(FormSpec::general(alpha, beta), mesh.scaled(1.0 / L), BoundaryCondition::free,
                            r.v.restricted(r.b, r.b + 1.0));
    const auto eg = negative_eigenvalues(g.K, g.M_V, g.M, 1e-13);
    const auto eh = negative_eigenvalues(h.K, h.M_V, h.M, 1e-13);
    REQUIRE(eg.count == eh.count);
    REQUIRE(eg.count > 0);
    for (std::size_t i = 0; i < eg.count; ++i) {
        CHECK(eg.negatives[i] == doctest::Approx(std::pow(L, -4.0) * eh.negatives[i]).epsilon(1e-8));
    }
}

TEST_CASE("random potentials satisfy the recursion") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        const auto v = random_potential(rng);
        const double nu = static_cast<double>(t % 3);
        const double D = 0.05 + 0.5 * static_cast<double>(t % 5);
        const auto p = compute_partition(v, nu, D);
        CHECK(p.a.front() == 0.0);
        CHECK(p.a[1] == v.support().lo);
        CHECK(p.a.back() >= v.support().hi);
        CHECK(partition_defect(v, p) <= 1e-9);
        for (std::size_t j = 1; j + 1 < p.a.size(); ++j) {
            CHECK(p.a[j + 1] > p.a[j]);
            CHECK(p.a[j + 1] - p.a[j] >= p.min_step * (1.0 - 1e-12));
        }
        const std::size_t bound = static_cast<std::size_t>(std::ceil((v.support().hi - v.support().lo) / p.min_step)) + 2;
        CHECK(p.a.size() <= bound + 1);
    }
}

TEST_CASE("halving the tolerance moves each cut by at most the tolerance") {
    const auto v = Potential::bump(0.5, 4.0, 300.0, 0.3);
    for (double nu : {0.0, 1.0}) {
        const double tol = 1e-8;
        const auto p = compute_partition(v, nu, 0.3, tol);
        for (std::size_t j = 1; j + 1 < p.a.size(); ++j) {
            const auto q = compute_partition(v.restricted(p.a[j], v.support().hi), nu, 0.3, tol / 2.0);
            REQUIRE(q.a.size() >= 3);
            CHECK(std::abs(q.a[2] - p.a[j + 1]) <= tol);
        }
    }
}

TEST_CASE("constant chain bound") {
    const auto k = compute_constants({identity_alpha(), 1.5, 0.0}, log_grid(1e-3, 1e3, 50), 48);
    const auto v = Potential::bump(1.0, 3.0, 400.0, 0.7);
    const auto p = compute_partition(v, 0.0, k.D_nu);
    const auto c = chain_check(p, k, 128);
    CHECK(c.intervals == p.rescaled.size());
    CHECK(c.lhs <= c.rhs);
    CHECK(c.max_count <= 2);
    CHECK(c.pass);
}

TEST_CASE("errors") {
    const auto v = Potential::step(1.0, 2.0, 1.0);
    CHECK_THROWS_AS(compute_partition(v, 0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(compute_partition(v, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(compute_partition(Potential::zero(), 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(compute_partition(v, 3.0, 1.0), DomainError);
}
