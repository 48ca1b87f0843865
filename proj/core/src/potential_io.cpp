#include "hrl/potential_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>

#include "hrl/errors.hpp"

namespace hrl {

namespace {

using nlohmann::json;

double number(const json& j, const char* key, std::optional<double> fallback = std::nullopt) {
    if (!j.contains(key)) {
        if (fallback) return *fallback;
        throw DomainError(std::string("potential params missing \"") + key + "\"");
    }
    if (!j.at(key).is_number()) throw DomainError(std::string("potential param \"") + key + "\" must be a number");
    return j.at(key).get<double>();
}

std::vector<std::pair<double, double>> pairs(const json& j, const char* what) {
    if (!j.is_array()) throw DomainError(std::string(what) + " must be an array of [x, v] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw DomainError(std::string(what) + " entries must be [x, v] number pairs");
        }
        out.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return out;
}

json pairs_to_json(const std::vector<std::pair<double, double>>& ps) {
    json a = json::array();
    for (const auto& [x, v] : ps) a.push_back({x, v});
    return a;
}

}  // namespace

Potential potential_from_json(const json& j) {
    if (!j.is_object()) throw DomainError("potential must be a JSON object");
    if (!j.contains("kind") || !j.at("kind").is_string()) throw DomainError("potential needs a string \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());

    Potential out = Potential::zero();
    if (kind == "composite") {
        if (!params.contains("components")) throw DomainError("composite potential needs params.components");
        std::vector<Potential> parts;
        for (const auto& c : params.at("components")) parts.push_back(potential_from_json(c));
        out = Potential::composite(std::move(parts));
    } else if (kind == "piecewise-linear") {
        out = Potential::piecewise_linear(pairs(params.at("knots"), "params.knots"));
    } else {
        if (!j.contains("support") || !j.at("support").is_array() || j.at("support").size() != 2) {
            throw DomainError("potential needs \"support\": [lo, hi]");
        }
        const double lo = j.at("support")[0].get<double>();
        const double hi = j.at("support")[1].get<double>();
        if (kind == "step") {
            out = Potential::step(lo, hi, number(params, "height"));
        } else if (kind == "bump") {
            out = Potential::bump(lo, hi, number(params, "amplitude", 1.0), number(params, "sharpness", 1.0));
        } else if (kind == "gaussian-truncated") {
            out = Potential::gaussian(lo, hi, number(params, "amplitude"), number(params, "center"),
                                      number(params, "width"));
        } else if (kind == "tabulated") {
            if (!j.contains("samples")) throw DomainError("tabulated potential needs \"samples\"");
            out = Potential::tabulated(lo, hi, pairs(j.at("samples"), "samples"));
        } else {
            throw DomainError("unknown potential kind \"" + kind + "\"");
        }
    }
    const double xscale = j.value("xscale", 1.0);
    const double factor = j.value("factor", 1.0);
    if (!(xscale > 0.0)) throw DomainError("potential xscale must be positive");
    if (xscale != 1.0) {
        out = out.dilated(xscale);
    }
    if (factor != 1.0) out = out.multiplied(factor);
    if (j.contains("window")) {
        const auto& w = j.at("window");
        if (!w.is_array() || w.size() != 2) throw DomainError("potential \"window\" must be [lo, hi]");
        out = out.restricted(w[0].get<double>(), w[1].get<double>());
    }
    return out;
}

json potential_to_json(const Potential& v) {
    json j;
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, Potential::Step>) {
                j = {{"kind", "step"}, {"support", {b.lo, b.hi}}, {"params", {{"height", b.height}}}};
            } else if constexpr (std::is_same_v<T, Potential::Bump>) {
                j = {{"kind", "bump"},
                     {"support", {b.lo, b.hi}},
                     {"params", {{"amplitude", b.amplitude}, {"sharpness", b.sharpness}}}};
            } else if constexpr (std::is_same_v<T, Potential::Gaussian>) {
                j = {{"kind", "gaussian-truncated"},
                     {"support", {b.lo, b.hi}},
                     {"params", {{"amplitude", b.amplitude}, {"center", b.center}, {"width", b.width}}}};
            } else if constexpr (std::is_same_v<T, Potential::Linear>) {
                if (b.clamp) {
                    j = {{"kind", "tabulated"}, {"support", {b.lo, b.hi}}, {"samples", pairs_to_json(b.knots)}};
                } else {
                    j = {{"kind", "piecewise-linear"},
                         {"support", {b.lo, b.hi}},
                         {"params", {{"knots", pairs_to_json(b.knots)}}}};
                }
            } else {
                json comps = json::array();
                for (const auto& p : b.parts) comps.push_back(potential_to_json(p));
                double lo = b.parts.front().support().lo;
                double hi = b.parts.front().support().hi;
                for (const auto& p : b.parts) {
                    lo = std::min(lo, p.support().lo);
                    hi = std::max(hi, p.support().hi);
                }
                j = {{"kind", "composite"}, {"support", {lo, hi}}, {"params", {{"components", comps}}}};
            }
        },
        v.base());
    if (v.xscale() != 1.0) j["xscale"] = v.xscale();
    if (v.factor() != 1.0) j["factor"] = v.factor();
    const Interval w = v.window();
    const Interval natural = potential_from_json(j).window();
    if (w.lo != natural.lo || w.hi != natural.hi) j["window"] = {w.lo / v.xscale(), w.hi / v.xscale()};
    return j;
}

Potential load_potential(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open potential file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DomainError("potential file " + path.string() + " is not valid JSON: " + e.what());
    }
    return potential_from_json(j);
}

}  // namespace hrl
