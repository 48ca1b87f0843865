#include "hrl/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hrl/errors.hpp"
#include "hrl/quadrature.hpp"

namespace hrl {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 diag3(double a, double b, double c) {
    Mat3 q{};
    q[0][0] = a;
    q[1][1] = b;
    q[2][2] = c;
    return q;
}

std::size_t front_count(BoundaryCondition bc) { return bc == BoundaryCondition::free ? 0 : 2; }
std::size_t back_count(BoundaryCondition bc) { return bc == BoundaryCondition::clamped_both ? 2 : 0; }

// Calls f(x, w, cell, shapes) at every quadrature node of the mesh.
template <class F>
void for_each_node(const Mesh& mesh, std::span<const double> extra_breaks, F&& f) {
    const GaussRule& rule = gauss16();
    std::vector<double> sub;
    for (std::size_t c = 0; c < mesh.cells(); ++c) {
        const double x0 = mesh.nodes[c];
        const double x1 = mesh.nodes[c + 1];
        const double h = x1 - x0;
        sub.assign({x0});
        for (double b : extra_breaks) {
            if (b > x0 && b < x1) sub.push_back(b);
        }
        sub.push_back(x1);
        std::sort(sub.begin(), sub.end());
        for (std::size_t p = 0; p + 1 < sub.size(); ++p) {
            const double half = 0.5 * (sub[p + 1] - sub[p]);
            const double mid = 0.5 * (sub[p + 1] + sub[p]);
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double x = mid + half * rule.nodes[q];
                const auto shapes = hermite_shapes((x - x0) / h, h);
                f(x, half * rule.weights[q], c, shapes);
            }
        }
    }
}

}  // namespace

std::size_t Mesh::locate(double x) const {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t idx = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    return std::min(idx, cells() - 1);
}

Mesh Mesh::scaled(double s) const {
    if (!(s > 0.0)) throw DomainError("mesh scale must be positive");
    Mesh out = *this;
    for (double& x : out.nodes) x *= s;
    return out;
}

Mesh build_mesh(double lo, double hi, std::size_t cells, double grading) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(hi > lo)) {
        std::ostringstream os;
        os << "invalid mesh interval [" << lo << ", " << hi << "]";
        throw DomainError(os.str());
    }
    if (lo < 0.0) throw DomainError("mesh must start at x0 >= 0");
    if (cells < 4) throw DomainError("mesh needs at least 4 cells");
    if (!(grading >= 1.0) || !std::isfinite(grading)) throw DomainError("mesh grading must be >= 1");
    Mesh m;
    m.grading = grading;
    m.nodes.resize(cells + 1);
    const double n = static_cast<double>(cells);
    const double lg = std::log(grading);
    for (std::size_t k = 0; k <= cells; ++k) {
        const double kk = static_cast<double>(k);
        double t = kk / n;
        if (grading > 1.0) t = std::expm1(kk * lg) / std::expm1(n * lg);
        m.nodes[k] = lo + (hi - lo) * t;
    }
    m.nodes.back() = hi;
    for (std::size_t k = 0; k < cells; ++k) {
        if (!(m.nodes[k + 1] > m.nodes[k])) throw DomainError("mesh grading too strong: cells underflow");
    }
    return m;
}

Mesh mesh_from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 5) throw DomainError("mesh needs at least 4 cells");
    if (!(nodes.front() >= 0.0)) throw DomainError("mesh must start at x0 >= 0");
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        if (!(nodes[k + 1] > nodes[k]) || !std::isfinite(nodes[k + 1])) {
            throw DomainError("mesh nodes must be finite and strictly increasing");
        }
    }
    Mesh m;
    m.nodes = std::move(nodes);
    m.grading = (m.nodes[2] - m.nodes[1]) / (m.nodes[1] - m.nodes[0]);
    return m;
}

double grading_for_first_cell(double lo, double hi, std::size_t cells, double first_cell) {
    if (!(hi > lo) || cells < 1 || !(first_cell > 0.0)) throw DomainError("invalid grading request");
    const double len = hi - lo;
    const double n = static_cast<double>(cells);
    if (first_cell * n >= len) return 1.0;
    // len / first_cell = (g^n - 1)/(g - 1), increasing in g.
    auto total = [&](double g) { return std::expm1(n * std::log(g)) / (g - 1.0); };
    const double target = len / first_cell;
    double a = 1.0 + 1e-15;
    double b = 2.0;
    while (total(b) < target) b *= 2.0;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double m = 0.5 * (a + b);
        (total(m) < target ? a : b) = m;
    }
    return 0.5 * (a + b);
}

const char* to_string(BoundaryCondition bc) {
    switch (bc) {
        case BoundaryCondition::clamped_both: return "clamped_both";
        case BoundaryCondition::clamped_left: return "clamped_left";
        case BoundaryCondition::free: return "free";
    }
    return "unknown";
}

FormSpec FormSpec::general(double alpha, double beta) {
    FormSpec s;
    s.family = Family::general;
    s.alpha = alpha;
    s.beta = beta;
    s.validate();
    return s;
}

FormSpec FormSpec::bilaplacian_hardy(double hardy) {
    FormSpec s;
    s.family = Family::bilaplacian_hardy;
    s.hardy = hardy;
    s.validate();
    return s;
}

FormSpec FormSpec::channel(double c, double hardy) {
    FormSpec s;
    s.family = Family::channel;
    s.c = c;
    s.hardy = hardy;
    s.validate();
    return s;
}

void FormSpec::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(hardy) || !std::isfinite(c)) {
        throw DomainError("form parameters must be finite");
    }
    if (family == Family::general) {
        if (alpha < 0.0 || beta < 0.0) throw DomainError("general family needs alpha >= 0 and beta >= 0");
        if (hardy != 0.0) throw DomainError("the general family carries no separate Hardy term");
    }
    if (family == Family::channel && c < 0.0) throw DomainError("channel coefficient must be >= 0");
}

void FormSpec::validate_for_interval() const {
    validate();
    if (family != Family::general) throw DomainError("interval theory needs the general (alpha, beta) family");
    if (!(beta < 1.5 + alpha)) {
        std::ostringstream os;
        os << "interval theory needs beta < 3/2 + alpha; got alpha = " << alpha << ", beta = " << beta;
        throw DomainError(os.str());
    }
}

const char* to_string(FormSpec::Family family) {
    switch (family) {
        case FormSpec::Family::general: return "general";
        case FormSpec::Family::bilaplacian_hardy: return "bilaplacian_hardy";
        case FormSpec::Family::channel: return "channel";
    }
    return "unknown";
}

std::array<std::array<double, 4>, 3> hermite_shapes(double s, double h) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    std::array<std::array<double, 4>, 3> n{};
    n[0] = {1.0 - 3.0 * s2 + 2.0 * s3, h * (s - 2.0 * s2 + s3), 3.0 * s2 - 2.0 * s3, h * (s3 - s2)};
    n[1] = {(-6.0 * s + 6.0 * s2) / h, 1.0 - 4.0 * s + 3.0 * s2, (6.0 * s - 6.0 * s2) / h, 3.0 * s2 - 2.0 * s};
    n[2] = {(-6.0 + 12.0 * s) / (h * h), (-4.0 + 6.0 * s) / h, (6.0 - 12.0 * s) / (h * h), (6.0 * s - 2.0) / h};
    return n;
}

HermiteSpace::HermiteSpace(Mesh mesh, BoundaryCondition bc)
    : mesh_(std::move(mesh)), bc_(bc), front_(front_count(bc)), back_(back_count(bc)) {
    if (mesh_.nodes.size() < 2) throw DomainError("Hermite space needs a mesh");
}

std::vector<double> HermiteSpace::interpolate_full(const std::function<double(double)>& f,
                                                   const std::function<double(double)>& df) const {
    std::vector<double> u(full_size());
    for (std::size_t i = 0; i < mesh_.nodes.size(); ++i) {
        u[2 * i] = f(mesh_.nodes[i]);
        u[2 * i + 1] = df(mesh_.nodes[i]);
    }
    return u;
}

std::vector<double> HermiteSpace::interpolate(const std::function<double(double)>& f,
                                              const std::function<double(double)>& df) const {
    return restrict(interpolate_full(f, df));
}

std::vector<double> HermiteSpace::restrict(std::span<const double> full) const {
    if (full.size() != full_size()) throw DomainError("coefficient vector has the wrong length");
    return {full.begin() + static_cast<std::ptrdiff_t>(front_), full.end() - static_cast<std::ptrdiff_t>(back_)};
}

std::vector<double> HermiteSpace::extend(std::span<const double> reduced) const {
    if (reduced.size() != size()) throw DomainError("coefficient vector has the wrong length");
    std::vector<double> full(full_size(), 0.0);
    std::copy(reduced.begin(), reduced.end(), full.begin() + static_cast<std::ptrdiff_t>(front_));
    return full;
}

Jet HermiteSpace::evaluate_in_cell(std::span<const double> u, std::size_t cell, double x) const {
    if (u.size() != size()) throw DomainError("coefficient vector has the wrong length");
    const double x0 = mesh_.nodes[cell];
    const double h = mesh_.nodes[cell + 1] - x0;
    const auto n = hermite_shapes((x - x0) / h, h);
    Jet out{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < 4; ++a) {
        const std::size_t g = 2 * cell + a;
        if (g < front_ || g >= full_size() - back_) continue;
        const double coef = u[g - front_];
        for (std::size_t k = 0; k < 3; ++k) out[k] += coef * n[k][a];
    }
    return out;
}

Jet HermiteSpace::evaluate(std::span<const double> u, double x) const {
    return evaluate_in_cell(u, mesh_.locate(x), x);
}

std::vector<double> HermiteSpace::point_evaluation(double x) const {
    std::vector<double> q(size(), 0.0);
    const std::size_t cell = mesh_.locate(x);
    const double x0 = mesh_.nodes[cell];
    const double h = mesh_.nodes[cell + 1] - x0;
    const auto n = hermite_shapes((x - x0) / h, h);
    for (std::size_t a = 0; a < 4; ++a) {
        const std::size_t g = 2 * cell + a;
        if (g < front_ || g >= full_size() - back_) continue;
        q[g - front_] = n[0][a];
    }
    return q;
}

SymBandMatrix assemble_kernel(const Mesh& mesh, const Kernel& kernel, std::span<const double> extra_breaks) {
    SymBandMatrix k(2 * mesh.nodes.size(), 3);
    std::array<std::array<double, 4>, 4> e{};
    std::size_t current = 0;
    auto flush = [&](std::size_t cell) {
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b <= a; ++b) k.add(2 * cell + a, 2 * cell + b, e[a][b]);
        }
        e = {};
    };
    for_each_node(mesh, extra_breaks, [&](double x, double w, std::size_t cell, const auto& n) {
        if (cell != current) {
            flush(current);
            current = cell;
        }
        const Mat3 q = kernel(x);
        // t[l][b] = sum_m q[l][m] n[m][b]
        std::array<std::array<double, 4>, 3> t{};
        for (std::size_t l = 0; l < 3; ++l) {
            for (std::size_t b = 0; b < 4; ++b) {
                t[l][b] = q[l][0] * n[0][b] + q[l][1] * n[1][b] + q[l][2] * n[2][b];
            }
        }
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b <= a; ++b) {
                e[a][b] += w * (n[0][a] * t[0][b] + n[1][a] * t[1][b] + n[2][a] * t[2][b]);
            }
        }
    });
    flush(current);
    return k;
}

Kernel general_kernel(double alpha, double beta) {
    return [alpha, beta](double x) {
        const std::array<double, 3> g{beta * (alpha + beta + 1.0) / (x * x), -(alpha + 2.0 * beta) / x, 1.0};
        Mat3 q{};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) q[i][j] = g[i] * g[j];
        }
        return q;
    };
}

Kernel channel_square_kernel(double c) {
    // |-u'' + c u/x^2|^2 after integrating the cross term by parts.
    return [c](double x) {
        const double x2 = x * x;
        return diag3((c * c - 6.0 * c) / (x2 * x2), 2.0 * c / x2, 1.0);
    };
}

Kernel bilaplacian_kernel() {
    return [](double) { return diag3(0.0, 0.0, 1.0); };
}

Kernel hardy_weight_kernel() {
    return [](double x) {
        const double x2 = x * x;
        return diag3(1.0 / (x2 * x2), 0.0, 0.0);
    };
}

Kernel mass_kernel() {
    return [](double) { return diag3(1.0, 0.0, 0.0); };
}

Kernel potential_kernel(const Potential& v) {
    return [v](double x) { return diag3(v.value(x), 0.0, 0.0); };
}

Kernel slope_weight_kernel(double p) {
    return [p](double x) { return diag3(0.0, std::pow(x, p), 0.0); };
}

Kernel value_weight_kernel(double p) {
    return [p](double x) { return diag3(std::pow(x, p), 0.0, 0.0); };
}

double form_density(const FormSpec& spec, const Jet& u, double x) {
    const double x2 = x * x;
    const double hardy = spec.hardy * u[0] * u[0] / (x2 * x2);
    switch (spec.family) {
        case FormSpec::Family::general: {
            const double a = spec.alpha;
            const double b = spec.beta;
            const double t = u[2] - (a + 2.0 * b) * u[1] / x + b * (a + b + 1.0) * u[0] / x2;
            return t * t;
        }
        case FormSpec::Family::bilaplacian_hardy: return u[2] * u[2] - hardy;
        case FormSpec::Family::channel: {
            const double t = -u[2] + spec.c * u[0] / x2;
            return t * t - hardy;
        }
    }
    return 0.0;
}

double integrate_jet(const HermiteSpace& space, std::span<const double> u,
                     const std::function<double(const Jet&, double)>& density) {
    const auto full = space.extend(u);
    double sum = 0.0;
    for_each_node(space.mesh(), {}, [&](double x, double w, std::size_t cell, const auto& n) {
        Jet j{0.0, 0.0, 0.0};
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t k = 0; k < 3; ++k) j[k] += full[2 * cell + a] * n[k][a];
        }
        sum += w * density(j, x);
    });
    return sum;
}

AssembledSystem assemble(const FormSpec& spec, const Mesh& mesh, BoundaryCondition bc, const Potential& v) {
    spec.validate();
    if (mesh.cells() < 4) throw DomainError("mesh needs at least 4 cells");
    const bool singular_end = mesh.lo() == 0.0 && bc == BoundaryCondition::free;
    const bool needs_weights = spec.family != FormSpec::Family::bilaplacian_hardy || spec.hardy != 0.0;
    if (singular_end && needs_weights) {
        throw DomainError("forms with singular weights need a clamped left end when the mesh starts at 0");
    }

    const std::size_t front = front_count(bc);
    const std::size_t back = back_count(bc);
    auto trim = [&](const SymBandMatrix& a) { return a.trimmed(front, back); };

    AssembledSystem sys;
    sys.spec = spec;
    sys.bc = bc;
    sys.mesh = mesh;

    Kernel principal;
    switch (spec.family) {
        case FormSpec::Family::general: principal = general_kernel(spec.alpha, spec.beta); break;
        case FormSpec::Family::bilaplacian_hardy: principal = bilaplacian_kernel(); break;
        case FormSpec::Family::channel: principal = channel_square_kernel(spec.c); break;
    }
    sys.K_principal = trim(assemble_kernel(mesh, principal));
    sys.M = trim(assemble_kernel(mesh, mass_kernel()));
    const std::size_t n = sys.M.size();
    if (singular_end) {
        sys.M_hardy = SymBandMatrix(n, 3);
    } else {
        sys.M_hardy = trim(assemble_kernel(mesh, hardy_weight_kernel()));
    }
    sys.K = spec.hardy != 0.0 ? sys.K_principal.plus(sys.M_hardy, -spec.hardy) : sys.K_principal;
    if (v.is_zero()) {
        sys.M_V = SymBandMatrix(n, 3);
    } else {
        const auto breaks = v.breakpoints();
        sys.M_V = trim(assemble_kernel(mesh, potential_kernel(v), breaks));
    }
    if (spec.family == FormSpec::Family::general) {
        auto [l1, l2] = constraint_vectors(mesh, spec.alpha, spec.beta, bc);
        sys.l1 = std::move(l1);
        sys.l2 = std::move(l2);
    }
    sys.dof_count = n;
    sys.half_bandwidth = 3;
    return sys;
}

std::pair<std::vector<double>, std::vector<double>> constraint_vectors(const Mesh& mesh, double alpha,
                                                                       double beta, BoundaryCondition bc) {
    std::vector<double> l1(2 * mesh.nodes.size(), 0.0);
    std::vector<double> l2(l1.size(), 0.0);
    for_each_node(mesh, {}, [&](double x, double w, std::size_t cell, const auto& n) {
        const double xb = std::pow(x, beta);
        const double xa = std::pow(x, alpha);
        for (std::size_t a = 0; a < 4; ++a) {
            l1[2 * cell + a] += w * n[0][a] * xb;
            // (phi / x^beta)' x^alpha
            l2[2 * cell + a] += w * (n[1][a] - beta * n[0][a] / x) * xa / xb;
        }
    });
    HermiteSpace space(mesh, bc);
    return {space.restrict(l1), space.restrict(l2)};
}

nlohmann::json band_to_json(const SymBandMatrix& a) {
    nlohmann::json rows = nlohmann::json::array();
    const std::size_t kd = a.bandwidth();
    for (std::size_t i = 0; i < a.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t d = kd + 1; d-- > 0;) row.push_back(d <= i ? a(i, i - d) : 0.0);
        rows.push_back(std::move(row));
    }
    return {{"n", a.size()}, {"kd", kd}, {"rows", std::move(rows)}};
}

SymBandMatrix band_from_json(const nlohmann::json& j) {
    const auto n = j.at("n").get<std::size_t>();
    const auto kd = j.at("kd").get<std::size_t>();
    const auto& rows = j.at("rows");
    if (rows.size() != n) throw DomainError("band JSON: row count does not match n");
    SymBandMatrix a(n, kd);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != kd + 1) throw DomainError("band JSON: each row needs kd + 1 entries");
        for (std::size_t d = 0; d <= kd && d <= i; ++d) a.at(i, i - d) = rows[i][kd - d].get<double>();
    }
    return a;
}

}  // namespace hrl
