#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hrl/band_matrix.hpp"

namespace hrl {

struct SpectrumResult {
    /// Ascending, all < 0.
    std::vector<double> negatives;
    /// cluster[i] marks eigenvalues that could not be separated at tolerance.
    std::vector<bool> cluster;
    std::size_t count = 0;
    double gamma = 0.0;
    double riesz_mean = 0.0;
    /// Bisection steps spent in total.
    std::size_t iterations = 0;

    /// Re-sums the Riesz mean for another exponent.
    SpectrumResult with_gamma(double g) const;
};

/// Number of eigenvalues of A u = lambda B u strictly below `shift`
/// (negative inertia of A - shift B). B must be positive definite.
std::size_t count_below(const SymBandMatrix& a, const SymBandMatrix& b, double shift);

/// Eigenvalues of (K - M_V) u = lambda M u strictly below shift.
std::size_t negative_count(const SymBandMatrix& k, const SymBandMatrix& m_v, const SymBandMatrix& m,
                           double shift = 0.0);

/// Negative eigenvalues of (K - M_V, M) by inertia bisection; each to absolute
/// width tol * max(1, |lambda|).
SpectrumResult negative_eigenvalues(const SymBandMatrix& k, const SymBandMatrix& m_v, const SymBandMatrix& m,
                                    double tol = 1e-10);

/// Same for a pencil (A, B) already combined.
SpectrumResult pencil_negative_eigenvalues(const SymBandMatrix& a, const SymBandMatrix& b, double tol = 1e-10);

/// sum |lambda|^gamma; entries must be negative.
double riesz_mean(std::span<const double> negatives, double gamma);

/// min u^T K u / u^T M u over {u : c.u = 0 for all c in constraints}.
/// Without constraints the banded pencil is bisected; otherwise the problem is
/// projected onto the constraint null space and solved densely.
double constrained_min_rayleigh(const SymBandMatrix& k, const SymBandMatrix& m_target,
                                const std::vector<std::vector<double>>& constraints = {},
                                double rel_tol = 1e-13);

/// All generalized eigenvalues of (A, B), ascending, by a dense solver (B positive definite).
std::vector<double> dense_generalized_eigenvalues(const SymBandMatrix& a, const SymBandMatrix& b);

}  // namespace hrl
