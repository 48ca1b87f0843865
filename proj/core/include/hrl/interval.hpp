#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hrl/discretize.hpp"
#include "hrl/potentials.hpp"

namespace hrl {

/// Parameters of the unit-interval operator H_b: form family (alpha, beta)
/// and the weight exponent nu.
struct IntervalParams {
    double alpha = 0.0;
    double beta = 0.0;
    double nu = 0.0;

    /// alpha >= 0, 0 <= beta < 3/2 + alpha, 0 <= nu < 3, nu <= 2 beta.
    void validate() const;
};

/// Mesh on [b, b+1]; for b < 1 the cells are graded toward b so the first
/// cell resolves the length scale b.
Mesh interval_mesh(double b, std::size_t cells);

/// Interpolants of f1 = x^beta and f2 = x^(alpha+beta+1) (free ends) and
/// their form energies. `normalized_*` divides by int |f''|^2 + int |f|^2.
struct KernelPair {
    std::vector<double> f1;
    std::vector<double> f2;
    double energy_f1 = 0.0;
    double energy_f2 = 0.0;
    double normalized_f1 = 0.0;
    double normalized_f2 = 0.0;
};
KernelPair kernel_pair(const Mesh& mesh, double alpha, double beta);

/// g_b = f2 - (<f1, f2> / <f1, f1>) f1 with L^2(b, b+1) products of the interpolants.
std::vector<double> orthogonalized_g(const Mesh& mesh, double alpha, double beta);

/// g_b as a function: x^(alpha+beta+1) - kappa x^beta, kappa from quadrature.
double orthogonalized_g_value(double x, double b, double alpha, double beta);

/// v = c1 f1 + c2 f2 + u with u satisfying both constraint functionals.
struct Decomposition {
    double c1 = 0.0;
    double c2 = 0.0;
    std::vector<double> u;
};
Decomposition decompose(const AssembledSystem& sys, std::span<const double> f1, std::span<const double> f2,
                        std::span<const double> v);

/// max_y sup{|u(y)|^2 / y^nu : h_b[u] = 1, l1.u = l2.u = 0} over `samples`
/// equispaced y in [b, b+1], one value per entry of nus.
std::vector<double> estimate_C(const Mesh& mesh, double alpha, double beta, std::span<const double> nus,
                               std::size_t samples = 1024);
double estimate_C(double b, double alpha, double beta, double nu, const Mesh& mesh, std::size_t samples = 1024);

/// (1/4) int |f|^2 / sup |f(y)|^2 / y^nu over [b, b+1] for f = f1 and f = g_b.
double b1_ratio(double b, double beta, double nu);
double b2_ratio(double b, double alpha, double beta, double nu);

struct IntervalConstants {
    double C0 = 0.0;
    double C_nu = 0.0;
    double B1 = 0.0;
    double B2 = 0.0;
    double B = 0.0;
    double D_nu = 0.0;
    double E_nu = 0.0;
    double nu = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> b_grid;
    std::size_t mesh_cells = 0;

    /// Fills B, D_nu, E_nu from C0, C_nu, B1, B2.
    void close_chain();
    bool cd_leq_one() const { return C_nu * D_nu <= 1.0 + 1e-12; }
    bool dpe_leq_one() const { return C0 * E_nu + 2.0 * C_nu * D_nu <= 1.0 + 1e-12; }
    bool be_geq_2d() const { return B * E_nu >= 2.0 * D_nu * (1.0 - 1e-12); }
    bool invariants_hold() const { return cd_leq_one() && dpe_leq_one() && be_geq_2d(); }
};

/// n log-spaced points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// Constant chain over b_grid; each b is solved on interval_mesh(b, mesh_cells).
IntervalConstants compute_constants(const IntervalParams& p, std::span<const double> b_grid,
                                    std::size_t mesh_cells = 48, std::size_t threads = 0);

struct TwoEigenvalueReport {
    double b = 0.0;
    double budget = 0.0;
    std::size_t count = 0;
    std::vector<double> eigenvalues;
    double E_nu = 0.0;
    bool count_is_two = false;
    bool above_minus_E = false;
    /// Set when the count falls short of 2: f1, f2 are only interpolated.
    bool resolution_limited = false;
};

/// Negative spectrum of H_b - V on [b, b+1] (free ends). Requires
/// int V x^nu <= D_nu (up to 1e-9 relative) and V not identically 0, unless
/// allow_over_budget is set.
TwoEigenvalueReport verify_two_eigenvalues(double b, const Potential& v, const IntervalConstants& k,
                                           std::size_t cells = 512, bool allow_over_budget = false);

}  // namespace hrl
