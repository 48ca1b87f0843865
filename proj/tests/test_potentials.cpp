#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hrl/errors.hpp"
#include "hrl/potential_io.hpp"
#include "hrl/potentials.hpp"

using namespace hrl;

namespace {

double gk(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

}  // namespace

TEST_CASE("evaluate") {
    const auto v = Potential::step(1.0, 2.0, 2.0);
    CHECK(v(1.5) == 2.0);
    CHECK(v(3.0) == 0.0);
    CHECK(v(0.5) == 0.0);
    CHECK_THROWS_AS(v(0.0), DomainError);
    CHECK_THROWS_AS(v(-1.0), DomainError);
    CHECK(v.value(-1.0) == 0.0);

    const auto b = Potential::bump(1.0, 2.0);
    CHECK(b(1.5) == doctest::Approx(std::exp(-1.0 / 0.5 - 1.0 / 0.5)).epsilon(1e-15));
    CHECK(b(1.0) == 0.0);
    CHECK(b(2.0) == 0.0);
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Potential::step(0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(Potential::step(2.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(Potential::step(1.0, 2.0, -1.0), DomainError);
    CHECK_THROWS_AS(Potential::bump(1.0, 2.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(Potential::piecewise_linear({{1.0, 1.0}, {0.5, 1.0}}), DomainError);
    CHECK_THROWS_AS(Potential::piecewise_linear({{1.0, -1.0}, {2.0, 1.0}}), DomainError);
}

TEST_CASE("weighted_moment closed forms and oracle") {
    CHECK(weighted_moment(Potential::step(1.0, 2.0, 2.0), 1.0, 2.0) == doctest::Approx(14.0 / 3.0).epsilon(1e-13));
    CHECK(weighted_moment(Potential::zero(), 1.7, 1.0) == 0.0);

    const auto b = Potential::bump(1.0, 2.0);
    const double oracle = gk([](double x) { return std::exp(-1.0 / (x - 1.0) - 1.0 / (2.0 - x)); }, 1.0, 2.0);
    CHECK(weighted_moment(b, 1.0, 0.0) == doctest::Approx(oracle).epsilon(1e-10));

    const auto g = Potential::gaussian(0.5, 3.0, 2.0, 1.5, 0.4);
    const double og = gk([](double x) { return std::pow(2.0 * std::exp(-0.5 * std::pow((x - 1.5) / 0.4, 2)), 1.5) * x * x; },
                         0.5, 3.0);
    CHECK(weighted_moment(g, 1.5, 2.0) == doctest::Approx(og).epsilon(1e-10));

    const auto pl = Potential::piecewise_linear({{1.0, 0.0}, {2.0, 3.0}, {3.0, 1.0}});
    // int_1^2 3(x-1) x dx + int_2^3 (7 - 2x) x dx = 5/2 + 29/6
    const double exact = 22.0 / 3.0;
    CHECK(weighted_moment(pl, 1.0, 1.0) ==
          doctest::Approx(gk([&](double x) { return pl.value(x) * x; }, 1.0, 3.0)).epsilon(1e-12));
    CHECK(weighted_moment(pl, 1.0, 1.0) == doctest::Approx(exact).epsilon(1e-12));
}

TEST_CASE("tabulated samples are clamped at zero") {
    const auto t = Potential::tabulated(1.0, 3.0, {{1.0, -1.0}, {2.0, 1.0}, {3.0, -1.0}});
    CHECK(t(1.25) == 0.0);
    CHECK(t(2.0) == doctest::Approx(1.0));
    CHECK(t(1.75) == doctest::Approx(0.5));
    for (double x = 1.0; x <= 3.0; x += 0.01) CHECK(t.value(x) >= 0.0);
}

TEST_CASE("scale") {
    const auto v = Potential::step(1.0, 2.0, 1.0);
    const auto s = v.scaled(2.0);
    CHECK(s.support().lo == doctest::Approx(0.5));
    CHECK(s.support().hi == doctest::Approx(1.0));
    CHECK(s(0.75) == doctest::Approx(16.0));
    CHECK(s(1.25) == 0.0);
    CHECK(weighted_moment(s, 1.0, 0.0) == doctest::Approx(8.0).epsilon(1e-13));
    const auto id = v.scaled(1.0);
    for (double x = 0.5; x < 2.5; x += 0.1) CHECK(id.value(x) == v.value(x));
}

TEST_CASE("scaling covariance of weighted moments") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < 30; ++t) {
        const double lo = 0.2 + U(rng);
        const double hi = lo + 0.3 + 2.0 * U(rng);
        const Potential v = t % 2 ? Potential::bump(lo, hi, 1.0 + 5.0 * U(rng), 0.2 + U(rng))
                                  : Potential::step(lo, hi, 0.5 + 3.0 * U(rng));
        const double p = 1.0 + 2.0 * U(rng);
        const double nu = 2.9 * U(rng);
        const double lam = std::exp(3.0 * (U(rng) - 0.5));
        const double lhs = weighted_moment(v.scaled(lam), p, nu);
        const double rhs = std::pow(lam, 4.0 * p - 1.0 - nu) * weighted_moment(v, p, nu);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("moments are positive for nonzero potentials") {
    for (double p : {1.0, 1.5, 3.0}) {
        for (double nu : {0.0, 1.0, 2.5}) {
            CHECK(weighted_moment(Potential::bump(0.5, 0.7, 1e-3), p, nu) > 0.0);
            CHECK(weighted_moment(Potential::step(2.0, 2.1, 1e-2), p, nu) > 0.0);
        }
    }
    CHECK_THROWS_AS(weighted_moment(Potential::step(1, 2, 1), 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(weighted_moment(Potential::step(1, 2, 1), 1.0, 3.0), DomainError);
}

TEST_CASE("composite sums its parts") {
    const auto a = Potential::step(1.0, 2.0, 1.0);
    const auto b = Potential::bump(1.5, 3.0, 2.0);
    const auto c = Potential::composite({a, b});
    for (double x = 0.5; x < 3.5; x += 0.05) CHECK(c.value(x) == doctest::Approx(a.value(x) + b.value(x)));
    CHECK(weighted_moment(c, 1.0, 1.0) ==
          doctest::Approx(weighted_moment(a, 1.0, 1.0) + weighted_moment(b, 1.0, 1.0)).epsilon(1e-12));
}

TEST_CASE("json round trip") {
    const nlohmann::json specs[] = {
        {{"kind", "step"}, {"support", {1, 2}}, {"params", {{"height", 3}}}},
        {{"kind", "bump"}, {"support", {0.5, 2}}, {"params", {{"amplitude", 4}, {"sharpness", 0.3}}}},
        {{"kind", "gaussian-truncated"}, {"support", {1, 3}}, {"params", {{"amplitude", 2}, {"center", 2}, {"width", 0.5}}}},
        {{"kind", "piecewise-linear"}, {"params", {{"knots", {{1, 0}, {2, 1}, {3, 0}}}}}},
        {{"kind", "tabulated"}, {"support", {1, 2}}, {"samples", {{1, 0.5}, {1.5, 2}, {2, 1}}}},
    };
    for (const auto& j : specs) {
        const auto v = potential_from_json(j);
        const auto w = potential_from_json(potential_to_json(v));
        for (double x = 0.3; x < 3.5; x += 0.037) CHECK(w.value(x) == doctest::Approx(v.value(x)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(potential_from_json({{"kind", "step"}, {"support", {0, 2}}, {"params", {{"height", 1}}}}),
                    DomainError);
    CHECK_THROWS_AS(potential_from_json({{"kind", "nope"}, {"support", {1, 2}}}), DomainError);
}

TEST_CASE("exponent set") {
    for (double nu : {0.0, 0.5, 2.0, 2.9}) {
        for (double dg : {0.0, 0.3, 1.7}) {
            ExponentSet e{nu, (3.0 - nu) / 4.0 + dg};
            CHECK(e.gamma_c() == (3.0 - nu) / 4.0);
            CHECK(e.hardy_rhs_exponent() == doctest::Approx(e.general_rhs_exponent()).epsilon(1e-15));
            CHECK_NOTHROW(e.validate());
        }
    }
    CHECK_THROWS_AS((ExponentSet{0.0, 0.5}.validate()), DomainError);
    CHECK_THROWS_AS((ExponentSet{3.0, 1.0}.validate()), DomainError);
}
