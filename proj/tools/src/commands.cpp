#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "hrl/cli/emit.hpp"
#include "hrl/cli/run.hpp"
#include "hrl/errors.hpp"
#include "hrl/halfline.hpp"
#include "hrl/interval.hpp"
#include "hrl/partition.hpp"
#include "hrl/potential_io.hpp"
#include "hrl/sphere3d.hpp"

namespace hrl::cli {

namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json mesh_json(const MeshInfo& m) {
    return {{"L", m.L}, {"cells", m.cells}, {"grading", m.grading}, {"dofs", m.dofs}};
}

json form_json(const FormSpec& f) {
    return {{"family", to_string(f.family)}, {"alpha", f.alpha}, {"beta", f.beta}, {"hardy", f.hardy}, {"c", f.c}};
}

json report_json(const VerificationReport& r, json problem, bool timing) {
    return {{"problem", std::move(problem)},
            {"lhs", r.lhs},
            {"rhs", r.rhs},
            {"ratio", r.ratio},
            {"pass", r.pass},
            {"mesh", mesh_json(r.mesh)},
            {"seconds", timing ? json(r.seconds) : json(nullptr)},
            {"spectrum", {{"count", r.count}, {"eigenvalues", r.eigenvalues}}}};
}

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

Outcome verify_halfline(const RunConfig& c) {
    const Potential& v = *c.potential;
    const Mesh mesh = halfline_mesh(v, c.mesh);
    const auto r = verify_inequality(c.form, v, c.nu, *c.gamma, mesh, c.theoretical_C, c.tol.eigen);
    json problem = {{"command", "verify-halfline"},
                    {"form", form_json(c.form)},
                    {"nu", c.nu},
                    {"gamma", r.gamma},
                    {"rhs_exponent", r.rhs_exponent},
                    {"potential", potential_to_json(v)},
                    {"theoretical_C", optional_number(c.theoretical_C)}};
    return {report_json(r, std::move(problem), c.report_timing), std::nullopt, r.pass};
}

RadialPotential radial_potential(const RunConfig& c) {
    if (!c.has("angular")) return RadialPotential::radial(*c.potential);
    const json& a = c.at("angular");
    if (!a.is_object() || !a.contains("kind") || !a.at("kind").is_string()) {
        throw ConfigError("\"angular\" needs a \"kind\"");
    }
    const std::string kind = a.at("kind").get<std::string>();
    if (kind == "constant") return RadialPotential::radial(*c.potential);
    if (kind == "hemisphere") {
        return RadialPotential::with_angular(*c.potential, [](const std::array<double, 3>& p) {
            return p[2] > 0.0 ? 2.0 : (p[2] < 0.0 ? 0.0 : 1.0);
        });
    }
    if (kind == "zonal") {
        if (!a.contains("coefficients") || !a.at("coefficients").is_array()) {
            throw ConfigError("zonal angular factor needs \"coefficients\"");
        }
        const auto coef = a.at("coefficients").get<std::vector<double>>();
        return RadialPotential::with_angular(*c.potential, [coef](const std::array<double, 3>& p) {
            double s = 0.0;
            for (std::size_t k = coef.size(); k-- > 0;) s = s * p[2] + coef[k];
            return s;
        });
    }
    throw ConfigError("unknown angular kind \"" + kind + "\"");
}

Outcome verify_3d_command(const RunConfig& c) {
    RadialPotential v;
    try {
        v = radial_potential(c);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    Options3d opt;
    opt.mesh = c.mesh;
    opt.tol = c.tol.eigen;
    if (c.has("single_copy")) opt.single_copy = c.at("single_copy").get<bool>();
    if (c.has("extra_channels")) opt.extra_channels = static_cast<int>(c.count("extra_channels", 1));
    const auto r = verify_3d(v, *c.gamma, opt, c.theoretical_C);

    json problem = {{"command", "verify-3d"},
                    {"gamma", *c.gamma},
                    {"rhs_exponent", r.report.rhs_exponent},
                    {"hardy", critical_hardy()},
                    {"potential", potential_to_json(v.profile)},
                    {"angular", c.has("angular") ? c.at("angular") : json({{"kind", "constant"}})},
                    {"single_copy", opt.single_copy},
                    {"theoretical_C", optional_number(c.theoretical_C)}};
    json out = report_json(r.report, std::move(problem), c.report_timing);
    bool pass = r.report.pass;
    json channels = json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& ch : r.channels) {
        channels.push_back({{"n", ch.n},
                            {"c", ch.c},
                            {"multiplicity", ch.multiplicity},
                            {"count", ch.count},
                            {"riesz_mean", ch.riesz_mean},
                            {"included", ch.included},
                            {"eigenvalues", ch.eigenvalues}});
        rows.push_back({std::to_string(ch.n), std::to_string(ch.c), std::to_string(ch.multiplicity),
                        std::to_string(ch.count), format_double(ch.riesz_mean), ch.included ? "1" : "0"});
    }
    out["channels"] = std::move(channels);
    out["n_max"] = r.n_max;
    out["cutoff_verified"] = r.cutoff_verified;
    if (v.angular) {
        const auto h = holder_check(v, *c.gamma);
        out["holder"] = {{"worst_excess", h.worst_excess}, {"samples", h.samples}, {"pass", h.pass}};
        out["angular_mean"] = v.angular_mean(1.0);
        pass = pass && h.pass;
    }
    out["pass"] = pass;
    return {out, csv_table({"n", "c", "multiplicity", "count", "riesz_mean", "included_flag"}, rows), pass};
}

Outcome partition_command(const RunConfig& c) {
    const double D = c.number("D");
    const Potential& v = *c.potential;
    const Partition p = compute_partition(v, c.nu, D, c.tol.partition);
    const double defect = partition_defect(v, p);
    json intervals = json::array();
    for (const auto& r : p.rescaled) {
        intervals.push_back({{"a_lo", r.a_lo}, {"a_hi", r.a_hi}, {"b", r.b}, {"budget", r.budget}});
    }
    const bool pass = defect <= 1e-9;
    json out = {{"problem",
                 {{"command", "partition"}, {"nu", c.nu}, {"D", D}, {"tol", p.tol}, {"potential", potential_to_json(v)}}},
                {"breakpoints", p.a},
                {"D_nu", p.D_nu},
                {"nu", p.nu},
                {"total_moment", p.total_moment},
                {"min_step", p.min_step},
                {"intervals", intervals},
                {"defect", defect},
                {"pass", pass}};
    return {out, std::nullopt, pass};
}

std::vector<double> b_grid(const RunConfig& c) {
    if (!c.has("b_grid")) return log_grid(1e-3, 1e3, 50);
    const json& g = c.at("b_grid");
    if (g.is_array()) {
        auto v = g.get<std::vector<double>>();
        if (v.empty()) throw ConfigError("b_grid must not be empty");
        for (double b : v) {
            if (!(b > 0.0)) throw ConfigError("b_grid entries must be positive");
        }
        return v;
    }
    if (!g.is_object()) throw ConfigError("b_grid must be an array or {lo, hi, count}");
    const double lo = g.value("lo", 1e-3);
    const double hi = g.value("hi", 1e3);
    const std::size_t n = g.value("count", std::size_t{50});
    if (!(lo > 0.0 && hi >= lo && n >= 1)) throw ConfigError("b_grid needs 0 < lo <= hi and count >= 1");
    return log_grid(lo, hi, n);
}

Outcome interval_constants_command(const RunConfig& c) {
    IntervalParams p{c.number("alpha"), c.number("beta"), c.nu};
    const auto grid = b_grid(c);
    const auto k = compute_constants(p, grid, c.count("cells", 48));
    const double gc = (3.0 - k.nu) / 4.0;
    const bool pass = k.invariants_hold();
    json out = {{"problem", {{"command", "interval-constants"}, {"alpha", k.alpha}, {"beta", k.beta}, {"nu", k.nu}}},
                {"C0", k.C0},
                {"C_nu", k.C_nu},
                {"B1", k.B1},
                {"B2", k.B2},
                {"B", k.B},
                {"D_nu", k.D_nu},
                {"E_nu", k.E_nu},
                {"nu", k.nu},
                {"alpha", k.alpha},
                {"beta", k.beta},
                {"b_grid", k.b_grid},
                {"mesh_cells", k.mesh_cells},
                {"invariants",
                 {{"C_nu*D_nu<=1", k.cd_leq_one()},
                  {"C0*E_nu+2*C_nu*D_nu<=1", k.dpe_leq_one()},
                  {"B*E_nu>=2*D_nu", k.be_geq_2d()}}},
                {"theoretical_C", 2.0 * std::pow(k.E_nu, gc) / k.D_nu},
                {"pass", pass}};
    return {out, std::nullopt, pass};
}

Outcome hardy_constant_command(const RunConfig& c) {
    HardyOptions opt;
    opt.base_cells = c.count("base_cells", opt.base_cells);
    opt.levels = c.count("levels", opt.levels);
    opt.length = c.number("length", opt.length);
    opt.first_cell = c.number("first_cell", opt.first_cell);
    if (c.has("boundary")) {
        const std::string b = c.at("boundary").get<std::string>();
        if (b == "clamped_left") {
            opt.bc = BoundaryCondition::clamped_left;
        } else if (b == "clamped_both") {
            opt.bc = BoundaryCondition::clamped_both;
        } else {
            throw ConfigError("boundary must be clamped_left or clamped_both");
        }
    }
    const auto s = hardy_constant_sequence(opt);
    json levels = json::array();
    for (const auto& l : s.levels) levels.push_back({{"cells", l.cells}, {"value", l.value}});
    json out = {{"problem",
                 {{"command", "hardy-constant"},
                  {"base_cells", opt.base_cells},
                  {"levels", opt.levels},
                  {"length", opt.length},
                  {"first_cell", opt.first_cell},
                  {"boundary", to_string(opt.bc)}}},
                {"levels", levels},
                {"sharp_constant", critical_hardy()},
                {"ratio_to_sharp", s.levels.back().value / critical_hardy()},
                {"decreasing", s.decreasing},
                {"above_sharp", s.above_sharp},
                {"near_sharp", s.near_sharp},
                {"pass", s.pass}};
    return {out, std::nullopt, s.pass};
}

Outcome identity_command(const RunConfig& c) {
    const std::size_t n = c.count("samples", 20);
    const std::uint64_t seed = c.count("seed", 1);
    std::mt19937_64 rng(seed);
    MeshOptions mo = c.mesh;
    const double L = mo.L > 0.0 ? mo.L : 8.0;
    const Mesh mesh = build_mesh(0.0, L, mo.cells, mo.grading);
    json samples = json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double lo = uniform(rng, 0.1, 3.0);
        const double width = uniform(rng, 0.2, 3.0);
        const double amp = uniform(rng, 0.1, 10.0);
        const double sharp = uniform(rng, 0.05, 1.0);
        if (lo + width > L) throw ConfigError("mesh.L is too short for the sample bumps (needs >= 6)");
        const auto s = form_identity_sample(bump_function(lo, lo + width, amp, sharp), mesh);
        worst = std::max(worst, s.rel_error);
        samples.push_back({{"lo", lo},
                           {"hi", lo + width},
                           {"amplitude", amp},
                           {"sharpness", sharp},
                           {"hardy_side", s.hardy_side},
                           {"general_side", s.general_side},
                           {"rel_error", s.rel_error}});
    }
    const bool pass = worst <= c.tol.identity;
    json out = {{"problem",
                 {{"command", "identity-check"},
                  {"samples", n},
                  {"seed", seed},
                  {"alpha", identity_alpha()},
                  {"beta", identity_beta()},
                  {"hardy", critical_hardy()}}},
                {"mesh", mesh_json(describe(mesh))},
                {"samples", samples},
                {"worst_rel_error", worst},
                {"tolerance", c.tol.identity},
                {"pass", pass}};
    return {out, std::nullopt, pass};
}

Outcome sweep_command(const RunConfig& c) {
    const Potential& v = *c.potential;
    const Mesh mesh = halfline_mesh(v, c.mesh);
    const auto rows = aizenman_lieb_sweep(c.form, v, c.nu, c.gammas, mesh);
    json jr = json::array();
    std::vector<std::vector<std::string>> csv;
    bool pass = true;
    for (const auto& r : rows) {
        jr.push_back({{"gamma", r.gamma}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"ratio", r.ratio}, {"pass", r.pass}});
        csv.push_back({format_double(r.gamma), format_double(r.lhs), format_double(r.rhs), format_double(r.ratio),
                       r.pass ? "true" : "false"});
        pass = pass && r.pass;
    }
    json out = {{"problem",
                 {{"command", "sweep"},
                  {"form", form_json(c.form)},
                  {"nu", c.nu},
                  {"gammas", c.gammas},
                  {"potential", potential_to_json(v)}}},
                {"rows", jr},
                {"mesh", mesh_json(describe(mesh))},
                {"seconds", nullptr},
                {"pass", pass}};
    return {out, csv_table({"gamma", "lhs", "rhs", "ratio", "pass"}, csv), pass};
}

Outcome sobolev_command(const RunConfig& c) {
    const json& pj = c.at("p");
    const double p = pj.is_string() ? std::numeric_limits<double>::infinity() : pj.get<double>();
    const double gamma = sobolev_gamma(p);
    const double D1 = c.number("D1", critical_hardy());
    json d2_info;
    double D2 = 0.0;
    if (c.has("D2") && c.at("D2").is_number()) {
        D2 = c.number("D2");
        d2_info = {{"source", "config"}};
    } else {
        const auto family = standard_family();
        const auto e = empirical_constant(FormSpec::bilaplacian_hardy(critical_hardy()), family, 0.0, gamma, c.mesh);
        D2 = std::pow(e.value, 1.0 / gamma);
        d2_info = {{"source", "empirical"}, {"C_emp", e.value}, {"argmax", e.argmax}};
    }
    std::vector<std::array<double, 4>> fns;
    if (c.has("functions")) {
        for (const auto& f : c.at("functions")) {
            fns.push_back({f.at("lo").get<double>(), f.at("hi").get<double>(), f.value("amplitude", 1.0),
                           f.value("sharpness", 1.0)});
        }
    } else {
        fns.push_back({1.0, 2.0, 1.0, 1.0});
    }
    double top = 0.0;
    for (const auto& f : fns) top = std::max(top, f[1]);
    const Mesh mesh = build_mesh(0.0, top, c.mesh.cells, 1.0);
    json results = json::array();
    bool pass = true;
    for (const auto& f : fns) {
        SmoothFunction u;
        try {
            u = bump_function(f[0], f[1], f[2], f[3]);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        const auto r = sobolev_check(u, p, D1, D2, mesh);
        results.push_back({{"lo", f[0]},
                           {"hi", f[1]},
                           {"amplitude", f[2]},
                           {"sharpness", f[3]},
                           {"lhs", r.lhs},
                           {"rhs", r.rhs},
                           {"pass", r.pass}});
        pass = pass && r.pass;
    }
    json out = {{"problem",
                 {{"command", "sobolev"},
                  {"p", pj},
                  {"gamma", gamma},
                  {"D1", D1},
                  {"D2", D2},
                  {"D2_from", d2_info}}},
                {"functions", results},
                {"mesh", mesh_json(describe(mesh))},
                {"seconds", nullptr},
                {"pass", pass}};
    return {out, std::nullopt, pass};
}

}  // namespace

Outcome execute(const RunConfig& c) {
    switch (c.command) {
        case Command::verify_halfline: return verify_halfline(c);
        case Command::verify_3d: return verify_3d_command(c);
        case Command::partition: return partition_command(c);
        case Command::interval_constants: return interval_constants_command(c);
        case Command::hardy_constant: return hardy_constant_command(c);
        case Command::identity_check: return identity_command(c);
        case Command::sweep: return sweep_command(c);
        case Command::sobolev: return sobolev_command(c);
    }
    throw ConfigError("unhandled command");
}

}  // namespace hrl::cli
