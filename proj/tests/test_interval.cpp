#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hrl/errors.hpp"
#include "hrl/halfline.hpp"
#include "hrl/interval.hpp"

using namespace hrl;

namespace {

double gk(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-14);
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW((IntervalParams{0.0, 0.0, 0.0}.validate()));
    CHECK_THROWS_AS((IntervalParams{0.0, 1.5, 0.0}.validate()), DomainError);
    CHECK_THROWS_AS((IntervalParams{1.0, 1.0, 2.5}.validate()), DomainError);
    CHECK_THROWS_AS((IntervalParams{-0.1, 0.0, 0.0}.validate()), DomainError);
}

TEST_CASE("kernel pair energies") {
    {
        const auto kp = kernel_pair(interval_mesh(1.0, 32), 0.7, 0.0);
        CHECK(kp.energy_f1 == 0.0);
    }
    {
        const auto kp = kernel_pair(interval_mesh(2.0, 32), 0.0, 0.0);
        CHECK(std::abs(kp.energy_f1) < 1e-14);
        CHECK(std::abs(kp.energy_f2) < 1e-14);
    }
    {
        const auto kp = kernel_pair(interval_mesh(1.0, 256), identity_alpha(), 1.5);
        CHECK(std::abs(kp.normalized_f1) < 1e-8);
        CHECK(std::abs(kp.normalized_f2) < 1e-8);
    }
}

TEST_CASE("orthogonalized g") {
    for (double b : {0.01, 1.0, 20.0}) {
        const double alpha = 0.4, beta = 1.1;
        const double kappa_num = gk([&](double x) { return std::pow(x, alpha + 2 * beta + 1); }, b, b + 1);
        const double kappa_den = gk([&](double x) { return std::pow(x, 2 * beta); }, b, b + 1);
        const double inner = gk([&](double x) { return orthogonalized_g_value(x, b, alpha, beta) * std::pow(x, beta); },
                                b, b + 1);
        const double gn = std::sqrt(gk([&](double x) { return std::pow(orthogonalized_g_value(x, b, alpha, beta), 2); },
                                       b, b + 1));
        CHECK(std::abs(inner) <= 1e-12 * gn * std::sqrt(kappa_den));
        const double x = b + 0.3;
        CHECK(orthogonalized_g_value(x, b, alpha, beta) ==
              doctest::Approx(std::pow(x, alpha + beta + 1) - kappa_num / kappa_den * std::pow(x, beta)).epsilon(1e-12));
    }
    // alpha = beta = 0: g = x - <1, x>/<1, 1> = x - (b + 1/2)
    for (double b : {0.5, 3.0}) CHECK(orthogonalized_g_value(b + 0.2, b, 0.0, 0.0) == doctest::Approx(0.2 - 0.5).epsilon(1e-12));

    const auto mesh = interval_mesh(1.0, 64);
    const auto g = orthogonalized_g(mesh, 0.4, 1.1);
    const auto sys = assemble(FormSpec::general(0.4, 1.1), mesh, BoundaryCondition::free);
    const auto kp = kernel_pair(mesh, 0.4, 1.1);
    const double ip = sys.M.form(g, kp.f1);
    CHECK(std::abs(ip) <= 1e-12 * std::sqrt(sys.M.form(g) * sys.M.form(kp.f1)));
}

TEST_CASE("decomposition reproduces random trial functions") {
    const double alpha = 0.3, beta = 0.9;
    const auto mesh = interval_mesh(0.8, 64);
    const auto sys = assemble(FormSpec::general(alpha, beta), mesh, BoundaryCondition::free);
    const auto kp = kernel_pair(mesh, alpha, beta);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> N(0.0, 1.0);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> v(sys.dof_count);
        for (auto& x : v) x = N(rng);
        const auto d = decompose(sys, kp.f1, kp.f2, v);
        double l1 = 0.0, l2 = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double r = d.c1 * kp.f1[i] + d.c2 * kp.f2[i] + d.u[i];
            CHECK(r == doctest::Approx(v[i]).epsilon(1e-10).scale(1.0));
            l1 += sys.l1[i] * d.u[i];
            l2 += sys.l2[i] * d.u[i];
            scale += std::abs(sys.l1[i] * d.u[i]) + std::abs(sys.l2[i] * d.u[i]);
        }
        CHECK(std::abs(l1) <= 1e-10 * scale);
        CHECK(std::abs(l2) <= 1e-10 * scale);
    }
}

TEST_CASE("estimate_C bounds random constrained functions and grows under refinement") {
    const double alpha = identity_alpha(), beta = 1.5;
    const double b = 1.0;
    for (double nu : {0.0, 2.0}) {
        const auto coarse = estimate_C(b, alpha, beta, nu, interval_mesh(b, 32), 257);
        const auto mesh = interval_mesh(b, 64);
        const auto fine = estimate_C(b, alpha, beta, nu, mesh, 257);
        CHECK(std::isfinite(fine));
        CHECK(fine >= coarse * (1.0 - 1e-10));

        const auto sys = assemble(FormSpec::general(alpha, beta), mesh, BoundaryCondition::free);
        const auto kp = kernel_pair(mesh, alpha, beta);
        const auto sp = sys.space();
        std::mt19937_64 rng(17);
        std::normal_distribution<double> N(0.0, 1.0);
        for (int t = 0; t < 100; ++t) {
            std::vector<double> v(sys.dof_count);
            for (auto& x : v) x = N(rng);
            auto u = decompose(sys, kp.f1, kp.f2, v).u;
            const double e = sys.K.form(u);
            for (auto& x : u) x /= std::sqrt(e);
            double worst = 0.0;
            for (std::size_t k = 0; k < 257; ++k) {
                const double y = k + 1 == 257 ? b + 1.0 : b + static_cast<double>(k) / 256.0;
                worst = std::max(worst, std::pow(sp.evaluate(u, y)[0], 2) / std::pow(y, nu));
            }
            CHECK(worst <= fine * (1.0 + 1e-6));
        }
    }
}

TEST_CASE("constant chain formulas") {
    IntervalConstants k;
    k.C0 = 4.0;
    k.C_nu = 4.0;
    k.B1 = 1.0;
    k.B2 = 1.0;
    k.close_chain();
    CHECK(k.B == 1.0);
    CHECK(k.D_nu == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
    CHECK(k.E_nu == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
    CHECK(k.invariants_hold());
}

TEST_CASE("B1 closed form for beta = 3/2, nu = 2, b = 1") {
    // (1/4) int_1^2 x^3 / sup_y y^3 / y^2 = (1/4)(15/4)/2
    CHECK(b1_ratio(1.0, 1.5, 2.0) == doctest::Approx(15.0 / 32.0).epsilon(1e-10));
}

TEST_CASE("computed constants satisfy the chain invariants") {
    const auto grid = log_grid(1e-3, 1e3, 50);
    CHECK(grid.size() == 50);
    CHECK(grid.front() == doctest::Approx(1e-3));
    CHECK(grid.back() == doctest::Approx(1e3));
    for (double nu : {0.0, 1.0}) {
        const auto k = compute_constants({identity_alpha(), 1.5, nu}, grid, 32);
        CHECK(k.C0 > 0.0);
        CHECK(k.C_nu > 0.0);
        CHECK(k.B > 0.0);
        CHECK(k.B == std::min(k.B1, k.B2));
        CHECK(k.cd_leq_one());
        CHECK(k.dpe_leq_one());
        CHECK(k.be_geq_2d());
        CHECK(k.E_nu == doctest::Approx(1.0 / (k.C0 * (1.0 + k.B))));
    }
}

TEST_CASE("two eigenvalue law") {
    const auto k = compute_constants({identity_alpha(), 1.5, 0.0}, log_grid(1e-3, 1e3, 50), 48);
    const double b = 1.0;
    const auto zero = verify_two_eigenvalues(b, Potential::zero(), k, 128, true);
    CHECK(zero.count == 0);

    const auto shape = Potential::bump(b + 0.45, b + 0.55, 1.0, 0.01);
    const auto v = shape.multiplied(k.D_nu / weighted_moment(shape, 1.0, 0.0, b, b + 1.0));
    const auto r = verify_two_eigenvalues(b, v, k, 512);
    CHECK(r.count == 2);
    CHECK(r.above_minus_E);
    CHECK(r.budget == doctest::Approx(k.D_nu).epsilon(1e-9));

    const auto big = verify_two_eigenvalues(b, v.multiplied(10.0), k, 256, true);
    CHECK(big.count >= 2);
    CHECK_THROWS_AS(verify_two_eigenvalues(b, v.multiplied(10.0), k, 256), DomainError);
}
