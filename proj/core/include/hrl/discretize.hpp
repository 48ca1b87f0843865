#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "hrl/band_matrix.hpp"
#include "hrl/potentials.hpp"

namespace hrl {

struct Mesh {
    std::vector<double> nodes;
    double grading = 1.0;

    std::size_t cells() const { return nodes.size() - 1; }
    double lo() const { return nodes.front(); }
    double hi() const { return nodes.back(); }
    /// Index of the cell containing x (clamped to the mesh).
    std::size_t locate(double x) const;
    /// All nodes multiplied by s.
    Mesh scaled(double s) const;
};

/// Geometric grading toward lo: consecutive cell lengths grow by `grading`.
Mesh build_mesh(double lo, double hi, std::size_t cells, double grading = 1.0);
/// Mesh from explicit breakpoints (strictly increasing, at least 4 cells, x0 >= 0).
Mesh mesh_from_nodes(std::vector<double> nodes);
/// Ratio g for which `cells` geometric cells on [lo, hi] start with a cell of
/// length first_cell (g >= 1).
double grading_for_first_cell(double lo, double hi, std::size_t cells, double first_cell);

enum class BoundaryCondition { clamped_both, clamped_left, free };

const char* to_string(BoundaryCondition bc);

struct FormSpec {
    enum class Family { general, bilaplacian_hardy, channel };

    Family family = Family::bilaplacian_hardy;
    double alpha = 0.0;
    double beta = 0.0;
    /// Hardy coefficient subtracted as -C * int |u|^2 / x^4.
    double hardy = 0.0;
    /// Channel coefficient n(n+1).
    double c = 0.0;

    static FormSpec general(double alpha, double beta);
    static FormSpec bilaplacian_hardy(double hardy);
    static FormSpec channel(double c, double hardy);

    /// Throws DomainError unless alpha >= 0 and 0 <= beta < 3/2 + alpha.
    void validate_for_interval() const;
    void validate() const;
};

const char* to_string(FormSpec::Family family);

/// Value, first and second derivative of a function at a point.
using Jet = std::array<double, 3>;

/// Hermite shape functions on a cell of length h at local coordinate s in [0,1],
/// ordered (value left, slope left, value right, slope right). Row k holds
/// the k-th x-derivative.
std::array<std::array<double, 4>, 3> hermite_shapes(double s, double h);

/// Piecewise cubic Hermite functions over a mesh. Global DOF 2i is the value
/// at node i, 2i+1 the slope.
class HermiteSpace {
public:
    HermiteSpace(Mesh mesh, BoundaryCondition bc);

    const Mesh& mesh() const { return mesh_; }
    BoundaryCondition bc() const { return bc_; }
    std::size_t full_size() const { return 2 * mesh_.nodes.size(); }
    /// Number of DOFs left after the boundary condition.
    std::size_t size() const { return full_size() - front_ - back_; }
    std::size_t front_dropped() const { return front_; }
    std::size_t back_dropped() const { return back_; }

    /// Full-length coefficient vector of the Hermite interpolant of f.
    std::vector<double> interpolate_full(const std::function<double(double)>& f,
                                         const std::function<double(double)>& df) const;
    /// Interpolant restricted to the free DOFs (dropped values are discarded).
    std::vector<double> interpolate(const std::function<double(double)>& f,
                                    const std::function<double(double)>& df) const;

    std::vector<double> restrict(std::span<const double> full) const;
    std::vector<double> extend(std::span<const double> reduced) const;

    /// (u, u', u'') at x for a reduced coefficient vector.
    Jet evaluate(std::span<const double> u, double x) const;
    /// Same, using the polynomial of a fixed cell (for one-sided limits).
    Jet evaluate_in_cell(std::span<const double> u, std::size_t cell, double x) const;

    /// Reduced vector q with q.u = u(x).
    std::vector<double> point_evaluation(double x) const;

private:
    Mesh mesh_;
    BoundaryCondition bc_;
    std::size_t front_ = 0;
    std::size_t back_ = 0;
};

/// Quadratic form kernel: integrand = j(x)^T Q(x) j(x) with j = (u, u', u'').
using Kernel = std::function<std::array<std::array<double, 3>, 3>(double)>;

/// Full-length band matrix (bandwidth 3) of a kernel, 16-point Gauss per
/// cell; cells are split at `extra_breaks` lying inside them.
SymBandMatrix assemble_kernel(const Mesh& mesh, const Kernel& kernel,
                              std::span<const double> extra_breaks = {});

/// Kernel pieces used by the form families.
Kernel general_kernel(double alpha, double beta);
Kernel channel_square_kernel(double c);
Kernel bilaplacian_kernel();
Kernel hardy_weight_kernel();
Kernel mass_kernel();
Kernel potential_kernel(const Potential& v);
/// int |u'|^2 x^p and int |u|^2 x^p.
Kernel slope_weight_kernel(double p);
Kernel value_weight_kernel(double p);

/// Integrand of the family's quadratic form (including the Hardy subtraction).
double form_density(const FormSpec& spec, const Jet& u, double x);

/// int density(jet of u, x) dx by Gauss quadrature on the space's cells.
/// Avoids the cancellation of u^T K u when u is nearly in the kernel.
double integrate_jet(const HermiteSpace& space, std::span<const double> u,
                     const std::function<double(const Jet&, double)>& density);

struct AssembledSystem {
    FormSpec spec;
    BoundaryCondition bc = BoundaryCondition::clamped_both;
    Mesh mesh;
    /// Full form, including -hardy * M_hardy.
    SymBandMatrix K;
    /// Form without the Hardy subtraction.
    SymBandMatrix K_principal;
    SymBandMatrix M;
    SymBandMatrix M_V;
    SymBandMatrix M_hardy;
    /// Constraint functionals (general family only, otherwise empty).
    std::vector<double> l1;
    std::vector<double> l2;
    std::size_t dof_count = 0;
    std::size_t half_bandwidth = 3;

    HermiteSpace space() const { return HermiteSpace(mesh, bc); }
};

/// Assembles all matrices of `spec` on the mesh with V's potential matrix.
/// M_hardy is only assembled when the mesh starts at 0 with a clamped left
/// end or when the mesh stays away from 0.
AssembledSystem assemble(const FormSpec& spec, const Mesh& mesh, BoundaryCondition bc,
                         const Potential& v = Potential::zero());

/// (l1, l2): l1.u = int u x^beta, l2.u = int (u / x^beta)' x^alpha, reduced to bc.
std::pair<std::vector<double>, std::vector<double>> constraint_vectors(const Mesh& mesh, double alpha,
                                                                       double beta,
                                                                       BoundaryCondition bc);

/// {"n", "kd", "rows"}: row i lists A(i, i-kd) ... A(i, i), zero-padded at the top.
nlohmann::json band_to_json(const SymBandMatrix& a);
SymBandMatrix band_from_json(const nlohmann::json& j);

}  // namespace hrl
