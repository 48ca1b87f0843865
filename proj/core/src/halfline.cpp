#include "hrl/halfline.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "hrl/errors.hpp"
#include "hrl/parallel.hpp"
#include "hrl/quadrature.hpp"

namespace hrl {

namespace {

// Gauss quadrature of f over the part of the mesh inside [lo, hi].
double integrate_on_mesh(const Mesh& mesh, double lo, double hi, const std::function<double(double)>& f) {
    double sum = 0.0;
    for (std::size_t c = 0; c < mesh.cells(); ++c) {
        const double a = std::max(lo, mesh.nodes[c]);
        const double b = std::min(hi, mesh.nodes[c + 1]);
        if (b > a) sum += integrate(f, a, b);
    }
    return sum;
}

void check_gamma(double nu, double gamma) {
    ExponentSet{nu, gamma}.validate();
}

}  // namespace

double identity_alpha() { return 0.5 * (std::sqrt(10.0) - 2.0); }

double default_length(const Potential& v) { return 2.0 * v.support().hi + 1.0; }

Mesh halfline_mesh(const Potential& v, const MeshOptions& opt) {
    const double L = opt.L > 0.0 ? opt.L : default_length(v);
    return build_mesh(0.0, L, opt.cells, opt.grading);
}

MeshInfo describe(const Mesh& mesh) {
    return {mesh.hi(), mesh.cells(), mesh.grading, 2 * mesh.cells() - 2};
}

SpectrumResult solve_halfline(const FormSpec& spec, const Potential& v, const Mesh& mesh, double tol) {
    if (mesh.lo() != 0.0) throw DomainError("half-line mesh must start at 0");
    const auto sys = assemble(spec, mesh, BoundaryCondition::clamped_both, v);
    return negative_eigenvalues(sys.K, sys.M_V, sys.M, tol);
}

double safe_ratio(double lhs, double rhs) {
    if (lhs == 0.0) return 0.0;
    return lhs / rhs;
}

double rhs_exponent(double nu, double gamma) { return gamma + (1.0 + nu) / 4.0; }

void VerificationReport::finish() {
    ratio = safe_ratio(lhs, rhs);
    if (theoretical_C) {
        pass = lhs <= *theoretical_C * rhs;
    } else {
        pass = std::isfinite(ratio);
    }
}

VerificationReport make_report(const FormSpec& spec, const SpectrumResult& spectrum, const Potential& v, double nu,
                               double gamma, const Mesh& mesh, std::optional<double> theoretical_C) {
    check_gamma(nu, gamma);
    VerificationReport r;
    r.family = to_string(spec.family);
    r.alpha = spec.alpha;
    r.beta = spec.beta;
    r.hardy = spec.hardy;
    r.c = spec.c;
    r.nu = nu;
    r.gamma = gamma;
    r.rhs_exponent = rhs_exponent(nu, gamma);
    r.lhs = riesz_mean(spectrum.negatives, gamma);
    r.rhs = weighted_moment(v, r.rhs_exponent, nu);
    r.count = spectrum.count;
    r.eigenvalues = spectrum.negatives;
    r.mesh = describe(mesh);
    r.theoretical_C = theoretical_C;
    r.finish();
    return r;
}

VerificationReport verify_inequality(const FormSpec& spec, const Potential& v, double nu, double gamma,
                                     const Mesh& mesh, std::optional<double> theoretical_C, double tol) {
    check_gamma(nu, gamma);
    if (spec.family == FormSpec::Family::general && !(nu <= 2.0 * spec.beta)) {
        std::ostringstream os;
        os << "the general family needs nu <= 2 beta (nu = " << nu << ", beta = " << spec.beta << ")";
        throw DomainError(os.str());
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto spectrum = solve_halfline(spec, v, mesh, tol);
    auto r = make_report(spec, spectrum, v, nu, gamma, mesh, theoretical_C);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Mesh refine_geometric(const Mesh& mesh) {
    if (mesh.cells() < 2) throw DomainError("refinement needs at least two cells");
    std::vector<double> x;
    x.reserve(2 * mesh.cells() + 1);
    for (std::size_t c = 0; c < mesh.cells(); ++c) {
        const double a = mesh.nodes[c];
        const double b = mesh.nodes[c + 1];
        x.push_back(a);
        if (a > 0.0) {
            x.push_back(std::sqrt(a * b));
        } else {
            const double g = (mesh.nodes[2] - mesh.nodes[1]) / (mesh.nodes[1] - mesh.nodes[0]);
            x.push_back(b / (1.0 + std::sqrt(g)));
        }
    }
    x.push_back(mesh.hi());
    return mesh_from_nodes(std::move(x));
}

HardySequence hardy_constant_sequence(const HardyOptions& opt) {
    if (opt.levels == 0) throw DomainError("hardy sequence needs at least one level");
    const double g = grading_for_first_cell(0.0, opt.length, opt.base_cells, opt.first_cell);
    Mesh mesh = build_mesh(0.0, opt.length, opt.base_cells, g);
    HardySequence out;
    for (std::size_t k = 0; k < opt.levels; ++k) {
        if (k > 0) mesh = refine_geometric(mesh);
        const auto sys = assemble(FormSpec::bilaplacian_hardy(0.0), mesh, opt.bc);
        out.levels.push_back({mesh.cells(), constrained_min_rayleigh(sys.K, sys.M_hardy)});
    }
    out.decreasing = true;
    out.above_sharp = true;
    for (std::size_t k = 0; k < out.levels.size(); ++k) {
        if (k > 0 && !(out.levels[k].value < out.levels[k - 1].value)) out.decreasing = false;
        if (out.levels[k].value < critical_hardy() - 1e-9) out.above_sharp = false;
    }
    out.near_sharp = out.levels.back().value <= critical_hardy() * 1.05;
    out.pass = out.decreasing && out.above_sharp && out.near_sharp;
    return out;
}

double theoretical_constant(double D_nu, double E_nu, double nu) {
    return 2.0 * std::pow(E_nu, (3.0 - nu) / 4.0) / D_nu;
}

SmoothFunction bump_function(double lo, double hi, double amplitude, double sharpness) {
    if (!(hi > lo) || !(lo > 0.0)) throw DomainError("bump function needs 0 < lo < hi");
    SmoothFunction f;
    f.lo = lo;
    f.hi = hi;
    f.jet = [=](double x) -> Jet {
        if (!(x > lo && x < hi)) return {0.0, 0.0, 0.0};
        const double a = x - lo;
        const double b = hi - x;
        const double phi = -sharpness / a - sharpness / b;
        const double d1 = sharpness / (a * a) - sharpness / (b * b);
        const double d2 = -2.0 * sharpness / (a * a * a) - 2.0 * sharpness / (b * b * b);
        const double u = amplitude * std::exp(phi);
        return {u, d1 * u, (d2 + d1 * d1) * u};
    };
    return f;
}

IdentitySample form_identity_sample(const SmoothFunction& u, const Mesh& mesh) {
    const FormSpec hardy = FormSpec::bilaplacian_hardy(critical_hardy());
    const FormSpec general = FormSpec::general(identity_alpha(), identity_beta());
    IdentitySample s;
    s.hardy_side = integrate_on_mesh(mesh, u.lo, u.hi, [&](double x) { return form_density(hardy, u.jet(x), x); });
    s.general_side =
        integrate_on_mesh(mesh, u.lo, u.hi, [&](double x) { return form_density(general, u.jet(x), x); });
    const double scale = std::max(std::abs(s.hardy_side), std::abs(s.general_side));
    s.rel_error = scale > 0.0 ? std::abs(s.hardy_side - s.general_side) / scale : 0.0;
    return s;
}

double verify_form_identity(std::span<const SmoothFunction> samples, const Mesh& mesh) {
    double worst = 0.0;
    for (const auto& u : samples) {
        if (u.lo < mesh.lo() || u.hi > mesh.hi()) throw DomainError("sample function leaves the mesh");
        worst = std::max(worst, form_identity_sample(u, mesh).rel_error);
    }
    return worst;
}

ScalingResult scaling_invariance_check(const FormSpec& spec, const Potential& v, double nu,
                                       std::span<const double> lambdas, MeshPolicy policy,
                                       const MeshOptions& opt, std::size_t threads) {
    const double gc = (3.0 - nu) / 4.0;
    const Mesh base = halfline_mesh(v, opt);
    ScalingResult out;
    out.lambdas.assign(lambdas.begin(), lambdas.end());
    // Index 0 is the unscaled potential.
    const auto ratios = parallel_map(
        lambdas.size() + 1,
        [&](std::size_t i) {
            if (i == 0) return verify_inequality(spec, v, nu, gc, base).ratio;
            const double lam = lambdas[i - 1];
            const Potential vl = v.scaled(lam);
            const Mesh m = policy == MeshPolicy::rescale ? base.scaled(1.0 / lam) : halfline_mesh(vl, opt);
            return verify_inequality(spec, vl, nu, gc, m).ratio;
        },
        threads);
    out.base_ratio = ratios[0];
    out.ratios.assign(ratios.begin() + 1, ratios.end());
    for (double r : out.ratios) {
        const double d = out.base_ratio == 0.0 ? std::abs(r) : std::abs(r / out.base_ratio - 1.0);
        out.drift = std::max(out.drift, d);
    }
    return out;
}

std::vector<SweepRow> aizenman_lieb_sweep(const FormSpec& spec, const Potential& v, double nu,
                                          std::span<const double> gammas, const Mesh& mesh) {
    for (double g : gammas) check_gamma(nu, g);
    const auto spectrum = solve_halfline(spec, v, mesh);
    std::vector<SweepRow> rows;
    for (double g : gammas) {
        const auto r = make_report(spec, spectrum, v, nu, g, mesh);
        rows.push_back({g, r.lhs, r.rhs, r.ratio, r.pass});
    }
    return rows;
}

double sobolev_gamma(double p) {
    if (!(p > 1.0)) throw DomainError("Sobolev check needs p > 1");
    const double q = std::isinf(p) ? 1.0 : p / (p - 1.0);
    return q - 0.25;
}

SobolevResult sobolev_check(const SmoothFunction& u, double p, double D1, double D2, const Mesh& mesh) {
    if (!(p > 1.0)) throw DomainError("Sobolev check needs p > 1");
    SobolevResult r;
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t k = 0; k <= 4096; ++k) {
            const double x = u.lo + (u.hi - u.lo) * static_cast<double>(k) / 4096.0;
            m = std::max(m, u.jet(x)[0] * u.jet(x)[0]);
        }
        r.lhs = m;
    } else {
        const double i = integrate_on_mesh(mesh, u.lo, u.hi, [&](double x) {
            return std::pow(std::abs(u.jet(x)[0]), 2.0 * p);
        });
        r.lhs = std::pow(i, 1.0 / p);
    }
    r.rhs = integrate_on_mesh(mesh, u.lo, u.hi, [&](double x) {
        const Jet j = u.jet(x);
        const double x2 = x * x;
        return j[2] * j[2] - D1 * j[0] * j[0] / (x2 * x2) + D2 * j[0] * j[0];
    });
    r.pass = r.lhs <= r.rhs;
    return r;
}

std::vector<NamedPotential> standard_family() {
    std::vector<NamedPotential> out;
    for (int k = 0; k < 10; ++k) {
        const double lo = 0.5 + 0.3 * k;
        const double hi = lo + 0.5 + 0.15 * k;
        const double h = 20.0 * std::pow(1.5, k);
        out.push_back({"step-" + std::to_string(k), Potential::step(lo, hi, h)});
    }
    for (int k = 0; k < 10; ++k) {
        const double lo = 0.3 + 0.35 * k;
        const double hi = lo + 1.0 + 0.2 * k;
        const double a = 100.0 * std::pow(1.4, k);
        out.push_back({"bump-" + std::to_string(k), Potential::bump(lo, hi, a, 0.5)});
    }
    for (int k = 0; k < 5; ++k) {
        std::vector<Potential> parts;
        for (int j = 0; j < k + 2; ++j) {
            const double lo = 0.5 + 1.2 * j + 0.1 * k;
            parts.push_back(Potential::bump(lo, lo + 0.8, 150.0 * (1.0 + 0.5 * ((j + k) % 3)), 0.4));
        }
        out.push_back({"multi-bump-" + std::to_string(k), Potential::composite(std::move(parts))});
    }
    return out;
}

EmpiricalConstant empirical_constant(const FormSpec& spec, std::span<const NamedPotential> family, double nu,
                                     double gamma, const MeshOptions& opt, std::size_t threads) {
    EmpiricalConstant out;
    out.ratios = parallel_map(
        family.size(),
        [&](std::size_t i) {
            return verify_inequality(spec, family[i].v, nu, gamma, halfline_mesh(family[i].v, opt)).ratio;
        },
        threads);
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (out.ratios[i] > out.value) {
            out.value = out.ratios[i];
            out.argmax = family[i].name;
        }
    }
    return out;
}

}  // namespace hrl
