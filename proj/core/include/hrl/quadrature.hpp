#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hrl {

/// Gauss–Legendre rule on the reference interval [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss–Legendre rule, computed by Newton iteration on P_n.
GaussRule make_gauss_legendre(std::size_t n);

/// The 16-point rule used throughout assembly (exact to degree 31).
const GaussRule& gauss16();

/// Integrates f over [a, b] with the given rule mapped affinely.
template <class F>
double integrate(F&& f, double a, double b, const GaussRule& rule = gauss16()) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        sum += rule.weights[q] * f(mid + half * rule.nodes[q]);
    }
    return sum * half;
}

/// Composite rule: each [breaks[i], breaks[i+1]] is split into `pieces`
/// equal sub-cells, each integrated with `rule`.
template <class F>
double integrate_composite(F&& f, std::span<const double> breaks, std::size_t pieces = 1,
                           const GaussRule& rule = gauss16()) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double h = (breaks[i + 1] - a) / static_cast<double>(pieces);
        if (!(h > 0.0)) continue;
        for (std::size_t p = 0; p < pieces; ++p) {
            sum += integrate(f, a + h * static_cast<double>(p), a + h * static_cast<double>(p + 1), rule);
        }
    }
    return sum;
}

}  // namespace hrl
