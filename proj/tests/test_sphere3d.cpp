#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>

#include "hrl/errors.hpp"
#include "hrl/sphere3d.hpp"

using namespace hrl;

namespace {

DenseMatrix from_eigen(const Eigen::MatrixXd& m) {
    DenseMatrix d = DenseMatrix::zero(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) d(i, j) = m(i, j);
    return d;
}

}  // namespace

TEST_CASE("exact rationals") {
    CHECK(Rational(6, -4) == Rational(-3, 2));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(epsilon_split() == Rational(16, 25));
    CHECK((Rational(1) - epsilon_split()) * Rational(25, 16) == Rational(9, 16));
    for (int n = 0; n <= 6; ++n) {
        const auto ch = ChannelSpec::make(n);
        CHECK(ch.c == n * (n + 1));
        CHECK(ch.multiplicity == 2 * n + 1);
        CHECK(ChannelSpec::make(n, true).multiplicity == 1);
        CHECK(ch.hardy_remainder == Rational(ch.c * ch.c) - Rational(3, 2) * Rational(ch.c) + Rational(9, 16));
    }
    CHECK(ChannelSpec::make(1).hardy_remainder == Rational(25, 16));
}

TEST_CASE("channel cutoff") {
    CHECK(channel_cutoff(Potential::step(0.5, 1.0, 1.0)) == 0);
    CHECK(channel_cutoff(Potential::step(0.5, 1.0, 10.0)) == 1);
    CHECK(channel_cutoff(Potential::zero()) == -1);
    // c^2 - 1.5 c for c = 6 is 27
    CHECK(channel_cutoff(Potential::step(0.5, 1.0, 27.0)) == 1);
    CHECK(channel_cutoff(Potential::step(0.5, 1.0, 27.5)) == 2);
}

TEST_CASE("Lebedev rule") {
    const auto& g = lebedev26();
    REQUIRE(g.size() == 26);
    auto integrate = [&](int a, int b, int c) {
        double s = 0.0;
        for (std::size_t q = 0; q < g.size(); ++q)
            s += g.weights[q] * std::pow(g.points[q][0], a) * std::pow(g.points[q][1], b) * std::pow(g.points[q][2], c);
        return s;
    };
    const double pi = std::numbers::pi;
    // int x^2a y^2b z^2c = 2 G(a+1/2) G(b+1/2) G(c+1/2) / G(a+b+c+3/2)
    auto exact = [&](int a, int b, int c) {
        if (a % 2 || b % 2 || c % 2) return 0.0;
        const double ha = a / 2 + 0.5, hb = b / 2 + 0.5, hc = c / 2 + 0.5;
        return 2.0 * std::tgamma(ha) * std::tgamma(hb) * std::tgamma(hc) / std::tgamma(ha + hb + hc);
    };
    CHECK(integrate(0, 0, 0) == doctest::Approx(4.0 * pi).epsilon(1e-14));
    for (int a = 0; a <= 7; ++a)
        for (int b = 0; a + b <= 7; ++b)
            for (int c = 0; a + b + c <= 7; ++c) CHECK(std::abs(integrate(a, b, c) - exact(a, b, c)) < 1e-13);

    const auto v = RadialPotential::with_angular(Potential::step(1.0, 2.0, 5.0),
                                                 [](const auto& p) { return p[2] > 0 ? 2.0 : p[2] < 0 ? 0.0 : 1.0; });
    CHECK(v.angular_mean() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(RadialPotential::with_angular(Potential::zero(), [](const auto& p) { return p[0]; }), DomainError);
}

TEST_CASE("Hoelder step") {
    const auto flat = RadialPotential::radial(Potential::bump(1.0, 2.0, 5.0, 0.5));
    const auto h0 = holder_check(flat, 0.25);
    CHECK(h0.pass);
    CHECK(std::abs(h0.worst_excess) < 1e-12);
    const auto tilted = RadialPotential::with_angular(Potential::bump(1.0, 2.0, 5.0, 0.5),
                                                      [](const auto& p) { return 1.0 + 0.9 * p[2]; });
    CHECK(holder_check(tilted, 1.0).pass);
    CHECK(radial_average(tilted)(1.5) == doctest::Approx(Potential::bump(1.0, 2.0, 5.0, 0.5)(1.5)).epsilon(1e-13));
}

TEST_CASE("channel lower bounds and the epsilon split") {
    const auto mesh = build_mesh(0.0, 50.0, 512, 1.03);
    for (int n = 1; n <= 6; ++n) {
        const auto ch = ChannelSpec::make(n);
        CHECK(channel_rayleigh(ch, mesh) >= ch.hardy_remainder.value() * (1.0 - 1e-6));
    }
    const int ns[] = {1, 2, 3, 4};
    const auto rows = epsilon_split_check(ns, mesh);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].psd);
        CHECK(rows[i].margin >= -1e-9);
        CHECK(rows[i].exact_margin.value() >= 0.0);
        if (i > 0) CHECK(rows[i].margin > rows[i - 1].margin);
    }
    CHECK(rows[0].exact_margin == Rational(0));
}

TEST_CASE("classical Hardy quotients") {
    const auto m = build_mesh(0.0, 1.0, 128, grading_for_first_cell(0.0, 1.0, 128, 1e-10));
    const auto q = classical_hardy_quotients(m);
    CHECK(q.first_order >= 0.25 - 1e-9);
    CHECK(q.weighted >= 2.25 - 1e-9);
    CHECK(q.first_order < 0.3);
    CHECK(q.weighted < 2.5);
}

TEST_CASE("cross-term bound") {
    const auto [p1, p2] = channel_projections();
    CHECK(cross_term_bound_check(DenseMatrix::identity(9), p1, p2));
    CHECK(cross_term_bound_check(DenseMatrix::zero(9), p1, p2));

    const auto w = angular_multiplication_matrix(
        RadialPotential::with_angular(Potential::step(1.0, 2.0, 1.0), [](const auto& p) { return 1.0 + p[2]; }));
    CHECK(cross_term_bound_check(w, p1, p2));
    const auto id = angular_multiplication_matrix(RadialPotential::radial(Potential::step(1.0, 2.0, 1.0)));
    for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j) CHECK(std::abs(id(i, j) - (i == j ? 1.0 : 0.0)) < 1e-14);

    std::mt19937_64 rng(2024);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_int_distribution<int> rank(1, 19);
    const int dim = 20;
    bool all = true;
    for (int trial = 0; trial < 1000; ++trial) {
        Eigen::MatrixXd a(dim, dim), b(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                a(i, j) = N(rng);
                b(i, j) = N(rng);
            }
        const Eigen::MatrixXd W = a * a.transpose();
        const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(b).householderQ();
        const int r = rank(rng);
        const Eigen::MatrixXd P1 = Q.leftCols(r) * Q.leftCols(r).transpose();
        const Eigen::MatrixXd P2 = Eigen::MatrixXd::Identity(dim, dim) - P1;
        all = all && cross_term_bound_check(from_eigen(W), from_eigen(P1), from_eigen(P2));
    }
    CHECK(all);

    auto bad = DenseMatrix::identity(9);
    bad(0, 0) = -1.0;
    CHECK_THROWS_AS(cross_term_bound_check(bad, p1, p2), DomainError);
}

TEST_CASE("3D verification") {
    const auto zero = verify_3d(RadialPotential::radial(Potential::zero()), 0.75);
    CHECK(zero.report.lhs == 0.0);
    CHECK(zero.n_max == -1);
    CHECK(zero.report.pass);
    CHECK_THROWS_AS(verify_3d(RadialPotential::radial(Potential::step(1.0, 2.0, 5.0)), 0.2), DomainError);

    const auto v = Potential::step(1.0, 2.0, 50.0);
    const auto r = verify_3d(RadialPotential::radial(v), 0.75);
    CHECK(r.report.family == "bilaplacian_hardy_3d");
    CHECK(r.n_max == 4);
    CHECK(r.cutoff_verified);
    CHECK(r.report.rhs == doctest::Approx(4.0 * std::numbers::pi * std::pow(50.0, 1.5) * 7.0 / 3.0).epsilon(1e-10));
    const auto h = verify_inequality(FormSpec::bilaplacian_hardy(critical_hardy()), v, 2.0, 0.75, halfline_mesh(v, {}));
    REQUIRE(!r.channels.empty());
    CHECK(r.channels[0].riesz_mean == doctest::Approx(h.lhs).epsilon(1e-12));
    double sum = 0.0;
    for (const auto& c : r.channels) {
        if (c.n > r.n_max) CHECK(c.count == 0);
        if (c.included) sum += c.multiplicity * c.riesz_mean;
    }
    CHECK(r.report.lhs == doctest::Approx(sum).epsilon(1e-14));

    const auto r2 = verify_3d(RadialPotential::radial(Potential::step(1.0, 2.0, 100.0)), 0.75);
    for (std::size_t i = 0; i < r.channels.size() && i < r2.channels.size(); ++i)
        CHECK(r2.channels[i].count >= r.channels[i].count);

    Options3d one;
    one.threads = 1;
    const auto serial = verify_3d(RadialPotential::radial(v), 0.75, one);
    CHECK(serial.report.lhs == r.report.lhs);
}
