#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hrl/discretize.hpp"
#include "hrl/potentials.hpp"
#include "hrl/spectral.hpp"

namespace hrl {

/// (alpha, beta) for which the general family's energy equals
/// int |u''|^2 - (9/16) int |u|^2 / x^4.
double identity_alpha();
constexpr double identity_beta() { return 1.5; }
constexpr double critical_hardy() { return 9.0 / 16.0; }

/// Half-line discretization: (0, L] clamped at both ends, geometric grading
/// toward 0. L = 0 means 2 * sup(supp V) + 1.
struct MeshOptions {
    std::size_t cells = 1024;
    double L = 0.0;
    double grading = 1.01;
};

Mesh halfline_mesh(const Potential& v, const MeshOptions& opt);
double default_length(const Potential& v);

struct MeshInfo {
    double L = 0.0;
    std::size_t cells = 0;
    double grading = 1.0;
    std::size_t dofs = 0;
};
MeshInfo describe(const Mesh& mesh);

/// Negative spectrum of (form - V) on the mesh with clamped ends.
SpectrumResult solve_halfline(const FormSpec& spec, const Potential& v, const Mesh& mesh, double tol = 1e-10);

struct VerificationReport {
    std::string family;
    double alpha = 0.0;
    double beta = 0.0;
    double hardy = 0.0;
    double c = 0.0;
    double nu = 0.0;
    double gamma = 0.0;
    double rhs_exponent = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    std::optional<double> theoretical_C;
    bool pass = false;
    std::size_t count = 0;
    std::vector<double> eigenvalues;
    MeshInfo mesh;
    double seconds = 0.0;

    /// pass = lhs <= theoretical_C * rhs when present, else ratio finite.
    void finish();
};

/// lhs / rhs with 0/0 read as 0.
double safe_ratio(double lhs, double rhs);

/// Right-hand side exponent gamma + (1 + nu)/4 (equal to 1 + gamma - gamma_c).
double rhs_exponent(double nu, double gamma);

/// Builds the report from an existing spectrum (gamma re-summed).
VerificationReport make_report(const FormSpec& spec, const SpectrumResult& spectrum, const Potential& v, double nu,
                               double gamma, const Mesh& mesh, std::optional<double> theoretical_C = std::nullopt);

/// Full pipeline: assemble, solve, compare. Throws DomainError for gamma < gamma_c.
VerificationReport verify_inequality(const FormSpec& spec, const Potential& v, double nu, double gamma,
                                     const Mesh& mesh, std::optional<double> theoretical_C = std::nullopt,
                                     double tol = 1e-10);

struct HardyOptions {
    std::size_t base_cells = 128;
    std::size_t levels = 3;
    double length = 1.0;
    double first_cell = 1e-16;
    BoundaryCondition bc = BoundaryCondition::clamped_left;
};

struct HardyLevel {
    std::size_t cells = 0;
    double value = 0.0;
};

struct HardySequence {
    std::vector<HardyLevel> levels;
    bool decreasing = false;
    /// every value >= 9/16 - 1e-9
    bool above_sharp = false;
    /// last value <= 9/16 * 1.05
    bool near_sharp = false;
    bool pass = false;
};

/// Splits every cell at its geometric mean; the cell at 0 keeps the grading ratio.
Mesh refine_geometric(const Mesh& mesh);

/// min of int |u''|^2 / int |u|^2/x^4 on nested meshes graded toward 0.
HardySequence hardy_constant_sequence(const HardyOptions& opt = {});

/// 2 E^gamma_c / D from the interval constant chain.
double theoretical_constant(double D_nu, double E_nu, double nu);

/// A C^2 test function given by its jet.
struct SmoothFunction {
    std::function<Jet(double)> jet;
    double lo = 0.0;
    double hi = 0.0;
};

/// amplitude * exp(-s/(x - lo) - s/(hi - x)) on (lo, hi).
SmoothFunction bump_function(double lo, double hi, double amplitude = 1.0, double sharpness = 1.0);

/// Energies of one sample under both sides of the (alpha, beta) identity.
struct IdentitySample {
    double hardy_side = 0.0;
    double general_side = 0.0;
    double rel_error = 0.0;
};
IdentitySample form_identity_sample(const SmoothFunction& u, const Mesh& mesh);
/// Worst relative discrepancy over the samples.
double verify_form_identity(std::span<const SmoothFunction> samples, const Mesh& mesh);

enum class MeshPolicy { rescale, fixed };

struct ScalingResult {
    std::vector<double> lambdas;
    std::vector<double> ratios;
    double base_ratio = 0.0;
    double drift = 0.0;
};

/// ratio(V_lambda) / ratio(V) - 1 at gamma = gamma_c. With `rescale` the
/// base mesh is scaled by 1/lambda; with `fixed` each V_lambda gets its own
/// default mesh from `opt`.
ScalingResult scaling_invariance_check(const FormSpec& spec, const Potential& v, double nu,
                                       std::span<const double> lambdas, MeshPolicy policy,
                                       const MeshOptions& opt, std::size_t threads = 0);

struct SweepRow {
    double gamma = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

/// One eigensolve, Riesz means re-summed for each gamma (all >= gamma_c).
std::vector<SweepRow> aizenman_lieb_sweep(const FormSpec& spec, const Potential& v, double nu,
                                          std::span<const double> gammas, const Mesh& mesh);

struct SobolevResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// (int |u|^2p)^(1/p) <= int (|u''|^2 - D1 |u|^2/x^4 + D2 |u|^2).
SobolevResult sobolev_check(const SmoothFunction& u, double p, double D1, double D2, const Mesh& mesh);

/// gamma = q - 1/4 for the conjugate exponent q of p.
double sobolev_gamma(double p);

struct NamedPotential {
    std::string name;
    Potential v;
};

/// 10 steps, 10 bumps and 5 multi-bumps with fixed parameters.
std::vector<NamedPotential> standard_family();

struct EmpiricalConstant {
    double value = 0.0;
    std::string argmax;
    std::vector<double> ratios;
};

/// sup of lhs/rhs over the family; a lower estimate of the best constant.
EmpiricalConstant empirical_constant(const FormSpec& spec, std::span<const NamedPotential> family, double nu,
                                     double gamma, const MeshOptions& opt, std::size_t threads = 0);

}  // namespace hrl
