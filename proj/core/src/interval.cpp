#include "hrl/interval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dense.hpp"
#include "hrl/errors.hpp"
#include "hrl/parallel.hpp"
#include "hrl/quadrature.hpp"
#include "hrl/spectral.hpp"

namespace hrl {

namespace {

double quad(const auto& f, double a, double b) {
    const double brk[] = {a, b};
    return integrate_composite(f, brk, 32);
}

// sup over [a, b] of a smooth f: dense sampling, then golden section around the best sample.
double sampled_sup(const auto& f, double a, double b, std::size_t n = 4096) {
    const double h = (b - a) / static_cast<double>(n);
    std::size_t best = 0;
    double fbest = f(a);
    for (std::size_t k = 1; k <= n; ++k) {
        const double v = f(k == n ? b : a + h * static_cast<double>(k));
        if (v > fbest) {
            fbest = v;
            best = k;
        }
    }
    double lo = std::max(a, a + h * (static_cast<double>(best) - 1.0));
    double hi = std::min(b, a + h * (static_cast<double>(best) + 1.0));
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max({fbest, f1, f2});
}

double kappa(double b, double alpha, double beta) {
    const double num = quad([&](double x) { return std::pow(x, alpha + 2.0 * beta + 1.0); }, b, b + 1.0);
    const double den = quad([&](double x) { return std::pow(x, 2.0 * beta); }, b, b + 1.0);
    return num / den;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

void IntervalParams::validate() const {
    std::ostringstream os;
    if (!(alpha >= 0.0)) os << "alpha must be >= 0 (got " << alpha << ")";
    else if (!(beta >= 0.0 && beta < 1.5 + alpha)) os << "need 0 <= beta < 3/2 + alpha (got beta = " << beta << ")";
    else if (!(nu >= 0.0 && nu < 3.0)) os << "need 0 <= nu < 3 (got " << nu << ")";
    else if (!(nu <= 2.0 * beta)) os << "need nu <= 2 beta (got nu = " << nu << ", beta = " << beta << ")";
    if (!os.str().empty()) throw DomainError(os.str());
}

Mesh interval_mesh(double b, std::size_t cells) {
    if (!(b > 0.0)) throw DomainError("interval operator needs b > 0");
    double g = 1.0;
    if (b < 1.0) g = grading_for_first_cell(b, b + 1.0, cells, b / static_cast<double>(cells));
    return build_mesh(b, b + 1.0, cells, g);
}

KernelPair kernel_pair(const Mesh& mesh, double alpha, double beta) {
    const auto sys = assemble(FormSpec::general(alpha, beta), mesh, BoundaryCondition::free);
    const HermiteSpace space = sys.space();
    const double p2 = alpha + beta + 1.0;
    KernelPair kp;
    kp.f1 = space.interpolate([&](double x) { return std::pow(x, beta); },
                              [&](double x) { return beta * std::pow(x, beta - 1.0); });
    kp.f2 = space.interpolate([&](double x) { return std::pow(x, p2); },
                              [&](double x) { return p2 * std::pow(x, p2 - 1.0); });
    const FormSpec spec = sys.spec;
    auto energy = [&](const Jet& j, double x) { return form_density(spec, j, x); };
    auto scale = [](const Jet& j, double) { return j[2] * j[2] + j[0] * j[0]; };
    kp.energy_f1 = integrate_jet(space, kp.f1, energy);
    kp.energy_f2 = integrate_jet(space, kp.f2, energy);
    kp.normalized_f1 = kp.energy_f1 / integrate_jet(space, kp.f1, scale);
    kp.normalized_f2 = kp.energy_f2 / integrate_jet(space, kp.f2, scale);
    return kp;
}

std::vector<double> orthogonalized_g(const Mesh& mesh, double alpha, double beta) {
    const auto kp = kernel_pair(mesh, alpha, beta);
    const auto m = assemble_kernel(mesh, mass_kernel());
    const double k = m.form(kp.f1, kp.f2) / m.form(kp.f1);
    std::vector<double> g(kp.f2);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= k * kp.f1[i];
    return g;
}

double orthogonalized_g_value(double x, double b, double alpha, double beta) {
    return std::pow(x, alpha + beta + 1.0) - kappa(b, alpha, beta) * std::pow(x, beta);
}

Decomposition decompose(const AssembledSystem& sys, std::span<const double> f1, std::span<const double> f2,
                        std::span<const double> v) {
    if (sys.l1.empty()) throw DomainError("decomposition needs the general family's constraint functionals");
    // [l1.f1 l1.f2; l2.f1 l2.f2] (c1, c2) = (l1.v, l2.v)
    const double a11 = dot(sys.l1, f1), a12 = dot(sys.l1, f2);
    const double a21 = dot(sys.l2, f1), a22 = dot(sys.l2, f2);
    const double r1 = dot(sys.l1, v), r2 = dot(sys.l2, v);
    const double det = a11 * a22 - a12 * a21;
    if (!(std::abs(det) > 0.0)) throw NumericalFailure("kernel pair does not separate the constraints");
    Decomposition d;
    d.c1 = (r1 * a22 - r2 * a12) / det;
    d.c2 = (a11 * r2 - a21 * r1) / det;
    d.u.assign(v.begin(), v.end());
    for (std::size_t i = 0; i < d.u.size(); ++i) d.u[i] -= d.c1 * f1[i] + d.c2 * f2[i];
    return d;
}

std::vector<double> estimate_C(const Mesh& mesh, double alpha, double beta, std::span<const double> nus,
                               std::size_t samples) {
    if (samples < 2) throw DomainError("estimate_C needs at least 2 samples");
    const auto sys = assemble(FormSpec::general(alpha, beta), mesh, BoundaryCondition::free);
    const std::size_t n = sys.dof_count;
    const auto ni = static_cast<Eigen::Index>(n);

    Eigen::VectorXd s(ni);
    for (std::size_t i = 0; i < n; ++i) s(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(sys.K(i, i));
    std::vector<std::vector<double>> cons = {sys.l1, sys.l2};
    for (auto& c : cons) {
        for (std::size_t i = 0; i < n; ++i) c[i] *= s(static_cast<Eigen::Index>(i));
    }
    const Eigen::MatrixXd ks = s.asDiagonal() * detail::to_eigen(sys.K) * s.asDiagonal();
    const Eigen::MatrixXd z = detail::null_space(cons, n);
    Eigen::MatrixXd kc = z.transpose() * ks * z;
    kc = 0.5 * (kc + kc.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(kc);
    if (llt.info() != Eigen::Success) {
        throw NumericalFailure("projected form is singular on the constrained subspace (mesh resolution)");
    }
    // Reproducing value q^T S Z Kc^{-1} Z^T S q = |L^{-1} Z^T S q|^2.
    const Eigen::MatrixXd w = llt.matrixL().solve(Eigen::MatrixXd(z.transpose() * s.asDiagonal()));

    const double b = mesh.lo();
    const HermiteSpace space = sys.space();
    std::vector<double> best(nus.size(), 0.0);
    std::size_t cached = mesh.cells();
    Eigen::Matrix4d g;
    for (std::size_t k = 0; k < samples; ++k) {
        const double y = k + 1 == samples ? mesh.hi() : b + static_cast<double>(k) / static_cast<double>(samples - 1);
        const std::size_t cell = mesh.locate(y);
        if (cell != cached) {
            const auto blk = w.middleCols(static_cast<Eigen::Index>(2 * cell), 4);
            g = blk.transpose() * blk;
            cached = cell;
        }
        const double x0 = mesh.nodes[cell];
        const double h = mesh.nodes[cell + 1] - x0;
        const auto shp = hermite_shapes((y - x0) / h, h);
        const Eigen::Vector4d q(shp[0][0], shp[0][1], shp[0][2], shp[0][3]);
        const double val = q.dot(g * q);
        for (std::size_t j = 0; j < nus.size(); ++j) best[j] = std::max(best[j], val / std::pow(y, nus[j]));
    }
    for (double v : best) {
        if (!std::isfinite(v)) throw NumericalFailure("non-finite reproducing value");
    }
    return best;
}

double estimate_C(double b, double alpha, double beta, double nu, const Mesh& mesh, std::size_t samples) {
    if (std::abs(mesh.lo() - b) > 1e-12 * std::max(1.0, b) || std::abs(mesh.hi() - b - 1.0) > 1e-12 * (b + 1.0)) {
        throw DomainError("estimate_C mesh must span [b, b+1]");
    }
    const double nus[] = {nu};
    return estimate_C(mesh, alpha, beta, nus, samples)[0];
}

double b1_ratio(double b, double beta, double nu) {
    const double num = quad([&](double x) { return std::pow(x, 2.0 * beta); }, b, b + 1.0);
    const double den = sampled_sup([&](double y) { return std::pow(y, 2.0 * beta - nu); }, b, b + 1.0);
    return 0.25 * num / den;
}

double b2_ratio(double b, double alpha, double beta, double nu) {
    const double k = kappa(b, alpha, beta);
    auto g = [&](double x) { return std::pow(x, alpha + beta + 1.0) - k * std::pow(x, beta); };
    const double num = quad([&](double x) { return g(x) * g(x); }, b, b + 1.0);
    const double den = sampled_sup([&](double y) { return g(y) * g(y) / std::pow(y, nu); }, b, b + 1.0);
    return 0.25 * num / den;
}

void IntervalConstants::close_chain() {
    B = std::min(B1, B2);
    D_nu = std::min({B / (2.0 * C_nu * (1.0 + B)), B / (2.0 * C0 * (1.0 + B)), 1.0 / C_nu});
    E_nu = 1.0 / (C0 * (1.0 + B));
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > lo) || n < 2) throw DomainError("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double a = std::log(lo);
    const double d = (std::log(hi) - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) g[i] = std::exp(a + d * static_cast<double>(i));
    g.front() = lo;
    g.back() = hi;
    return g;
}

IntervalConstants compute_constants(const IntervalParams& p, std::span<const double> b_grid, std::size_t mesh_cells,
                                    std::size_t threads) {
    p.validate();
    if (b_grid.empty()) throw DomainError("b grid is empty");
    struct Row {
        double c0, cnu, r1, r2;
    };
    const auto rows = parallel_map(
        b_grid.size(),
        [&](std::size_t i) {
            const double b = b_grid[i];
            const double nus[] = {0.0, p.nu};
            const auto c = estimate_C(interval_mesh(b, mesh_cells), p.alpha, p.beta, nus);
            return Row{c[0], c[1], b1_ratio(b, p.beta, p.nu), b2_ratio(b, p.alpha, p.beta, p.nu)};
        },
        threads);
    IntervalConstants k;
    k.alpha = p.alpha;
    k.beta = p.beta;
    k.nu = p.nu;
    k.b_grid.assign(b_grid.begin(), b_grid.end());
    k.mesh_cells = mesh_cells;
    k.B1 = k.B2 = std::numeric_limits<double>::infinity();
    for (const Row& r : rows) {
        k.C0 = std::max(k.C0, r.c0);
        k.C_nu = std::max(k.C_nu, r.cnu);
        k.B1 = std::min(k.B1, r.r1);
        k.B2 = std::min(k.B2, r.r2);
    }
    k.close_chain();
    for (double v : {k.C0, k.C_nu, k.B1, k.B2, k.D_nu, k.E_nu}) {
        if (!std::isfinite(v) || !(v > 0.0)) throw DomainError("non-finite or non-positive interval constant");
    }
    return k;
}

TwoEigenvalueReport verify_two_eigenvalues(double b, const Potential& v, const IntervalConstants& k,
                                           std::size_t cells, bool allow_over_budget) {
    const IntervalParams p{k.alpha, k.beta, k.nu};
    p.validate();
    TwoEigenvalueReport r;
    r.b = b;
    r.E_nu = k.E_nu;
    r.budget = weighted_moment(v, 1.0, k.nu, b, b + 1.0);
    if (!allow_over_budget && r.budget > k.D_nu * (1.0 + 1e-9)) {
        std::ostringstream os;
        os << "potential budget " << r.budget << " exceeds D_nu = " << k.D_nu;
        throw DomainError(os.str());
    }
    const auto sys = assemble(FormSpec::general(k.alpha, k.beta), interval_mesh(b, cells), BoundaryCondition::free,
                              v.restricted(b, b + 1.0));
    const auto spec = negative_eigenvalues(sys.K, sys.M_V, sys.M, 1e-12);
    r.count = spec.count;
    r.eigenvalues = spec.negatives;
    r.count_is_two = r.count == 2;
    r.above_minus_E = std::all_of(r.eigenvalues.begin(), r.eigenvalues.end(),
                                  [&](double l) { return l >= -k.E_nu; });
    r.resolution_limited = !v.is_zero() && r.count < 2;
    return r;
}

}  // namespace hrl
