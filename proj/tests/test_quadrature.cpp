#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hrl/quadrature.hpp"

using namespace hrl;

TEST_CASE("gauss16 weights sum to 2 and nodes are symmetric") {
    const auto& g = gauss16();
    REQUIRE(g.size() == 16);
    double s = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        s += g.weights[i];
        CHECK(g.nodes[i] == doctest::Approx(-g.nodes[15 - i]).epsilon(1e-15));
    }
    CHECK(s == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("gauss16 is exact to degree 31") {
    for (int k = 0; k <= 31; ++k) {
        const double exact = (std::pow(3.0, k + 1) - std::pow(0.5, k + 1)) / (k + 1);
        const double q = integrate([k](double x) { return std::pow(x, k); }, 0.5, 3.0);
        CHECK(q == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("small rules match the known closed forms") {
    const auto g2 = make_gauss_legendre(2);
    CHECK(g2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
    CHECK(g2.weights[0] == doctest::Approx(1.0));
    const auto g3 = make_gauss_legendre(3);
    CHECK(g3.nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
    CHECK(g3.weights[1] == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("composite rule against Gauss-Kronrod on a smooth integrand") {
    auto f = [](double x) { return std::exp(-x) * std::sin(3.0 * x); };
    const std::vector<double> breaks{0.0, 0.7, 2.0, 5.0};
    const double q = integrate_composite(f, breaks, 4);
    const double oracle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 5.0, 15, 1e-14);
    CHECK(q == doctest::Approx(oracle).epsilon(1e-13));
}
