#pragma once

#include <cstddef>
#include <vector>

#include "hrl/interval.hpp"
#include "hrl/potentials.hpp"

namespace hrl {

/// One interior interval [a_lo, a_hi] mapped to [b, b+1].
struct RescaledInterval {
    double a_lo = 0.0;
    double a_hi = 0.0;
    double b = 0.0;
    /// (a_hi - a_lo)^4 V((a_hi - a_lo) x), restricted to [b, b+1].
    Potential v = Potential::zero();
    /// int_b^{b+1} V_j x^nu.
    double budget = 0.0;
};

struct Partition {
    /// a_0 = 0 < a_1 < ... < a_n.
    std::vector<double> a;
    double D_nu = 0.0;
    double nu = 0.0;
    double tol = 0.0;
    /// Intervals [a_j, a_{j+1}] for j = 1 .. n-1.
    std::vector<RescaledInterval> rescaled;
    /// int_0^inf V x^nu.
    double total_moment = 0.0;
    /// (D / total_moment)^(1/(3-nu)).
    double min_step = 0.0;
};

/// (t - a)^(3-nu) int_a^t V x^nu.
double partition_functional(const Potential& v, double nu, double a, double t);

/// Interval splitting with equal budget D per interior interval. The first
/// cut is the bottom of V's support; the recursion ends once a cut reaches
/// the top of the support.
Partition compute_partition(const Potential& v, double nu, double D, double tol = 1e-12);

RescaledInterval rescale_interval(const Potential& v, double a_lo, double a_hi, double nu);

/// Largest |F(a_j, a_{j+1}) - D| / D over interior intervals, measured by
/// bracketing: 0 when D lies between F at a_{j+1} -/+ 2 tol.
double partition_defect(const Potential& v, const Partition& p);

struct ChainCheck {
    /// sum_j tr(H_{b_j} - V_j)_-^{gamma_c} (a_{j+1} - a_j)^{-(3-nu)}
    double lhs = 0.0;
    /// (2 E^{gamma_c} / D) int V x^nu
    double rhs = 0.0;
    std::size_t intervals = 0;
    std::size_t max_count = 0;
    bool pass = false;
};

/// Solves every interior interval on `cells` cells and compares with the
/// constant chain.
ChainCheck chain_check(const Partition& p, const IntervalConstants& k, std::size_t cells = 256,
                       std::size_t threads = 0);

}  // namespace hrl
