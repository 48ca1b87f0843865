#include "hrl/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hrl/errors.hpp"
#include "hrl/quadrature.hpp"

namespace hrl {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_support(double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi))) throw DomainError("potential support must be finite");
    if (!(lo > 0.0)) {
        std::ostringstream os;
        os << "potential support must lie inside (0, inf); got lower end " << lo;
        throw DomainError(os.str());
    }
    if (!(hi > lo)) throw DomainError("potential support needs lo < hi");
}

void check_nonnegative(double v, const char* what) {
    if (!(std::isfinite(v) && v >= 0.0)) {
        std::ostringstream os;
        os << what << " must be finite and nonnegative; got " << v;
        throw DomainError(os.str());
    }
}

double interpolate(const std::vector<std::pair<double, double>>& knots, double x) {
    if (x < knots.front().first || x > knots.back().first) return 0.0;
    auto it = std::upper_bound(knots.begin(), knots.end(), x,
                               [](double v, const auto& k) { return v < k.first; });
    if (it == knots.end()) return knots.back().second;
    if (it == knots.begin()) return knots.front().second;
    const auto& [x1, v1] = *it;
    const auto& [x0, v0] = *(it - 1);
    const double t = (x - x0) / (x1 - x0);
    return v0 + t * (v1 - v0);
}

void check_knots(const std::vector<std::pair<double, double>>& knots) {
    if (knots.size() < 2) throw DomainError("piecewise potentials need at least two samples");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second)) {
            throw DomainError("piecewise potential samples must be finite");
        }
        if (i > 0 && !(knots[i].first > knots[i - 1].first)) {
            throw DomainError("piecewise potential samples must be strictly increasing in x");
        }
    }
}

}  // namespace

const char* to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::step: return "step";
        case PotentialKind::bump: return "bump";
        case PotentialKind::gaussian_truncated: return "gaussian-truncated";
        case PotentialKind::piecewise_linear: return "piecewise-linear";
        case PotentialKind::tabulated: return "tabulated";
        case PotentialKind::composite: return "composite";
    }
    return "unknown";
}

Potential::Potential(std::shared_ptr<const Base> base, double factor, double xscale, Interval window)
    : base_(std::move(base)), factor_(factor), xscale_(xscale), window_(window) {}

Potential Potential::zero() { return step(1.0, 2.0, 0.0); }

Potential Potential::step(double lo, double hi, double height) {
    check_support(lo, hi);
    check_nonnegative(height, "step height");
    return Potential(std::make_shared<const Base>(Step{lo, hi, height}), 1.0, 1.0, {lo, hi});
}

Potential Potential::bump(double lo, double hi, double amplitude, double sharpness) {
    check_support(lo, hi);
    check_nonnegative(amplitude, "bump amplitude");
    if (!(sharpness > 0.0 && std::isfinite(sharpness))) throw DomainError("bump sharpness must be positive");
    return Potential(std::make_shared<const Base>(Bump{lo, hi, amplitude, sharpness}), 1.0, 1.0, {lo, hi});
}

Potential Potential::gaussian(double lo, double hi, double amplitude, double center, double width) {
    check_support(lo, hi);
    check_nonnegative(amplitude, "gaussian amplitude");
    if (!(width > 0.0 && std::isfinite(width))) throw DomainError("gaussian width must be positive");
    if (!std::isfinite(center)) throw DomainError("gaussian center must be finite");
    return Potential(std::make_shared<const Base>(Gaussian{lo, hi, amplitude, center, width}), 1.0, 1.0,
                     {lo, hi});
}

Potential Potential::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    check_knots(knots);
    for (const auto& k : knots) check_nonnegative(k.second, "piecewise-linear knot value");
    const double lo = knots.front().first;
    const double hi = knots.back().first;
    check_support(lo, hi);
    return Potential(std::make_shared<const Base>(Linear{std::move(knots), lo, hi, false}), 1.0, 1.0,
                     {lo, hi});
}

Potential Potential::tabulated(double lo, double hi, std::vector<std::pair<double, double>> samples) {
    check_support(lo, hi);
    check_knots(samples);
    if (samples.front().first < lo || samples.back().first > hi) {
        throw DomainError("tabulated samples must lie inside the declared support");
    }
    return Potential(std::make_shared<const Base>(Linear{std::move(samples), lo, hi, true}), 1.0, 1.0,
                     {lo, hi});
}

Potential Potential::composite(std::vector<Potential> parts) {
    if (parts.empty()) throw DomainError("composite potential needs at least one component");
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& p : parts) {
        lo = std::min(lo, p.support().lo);
        hi = std::max(hi, p.support().hi);
    }
    return Potential(std::make_shared<const Base>(Composite{std::move(parts)}), 1.0, 1.0, {lo, hi});
}

PotentialKind Potential::kind() const {
    return std::visit(Overloaded{
                          [](const Step&) { return PotentialKind::step; },
                          [](const Bump&) { return PotentialKind::bump; },
                          [](const Gaussian&) { return PotentialKind::gaussian_truncated; },
                          [](const Linear& l) {
                              return l.clamp ? PotentialKind::tabulated : PotentialKind::piecewise_linear;
                          },
                          [](const Composite&) { return PotentialKind::composite; },
                      },
                      *base_);
}

Interval Potential::base_support() const {
    return std::visit(Overloaded{
                          [](const Step& s) { return Interval{s.lo, s.hi}; },
                          [](const Bump& b) { return Interval{b.lo, b.hi}; },
                          [](const Gaussian& g) { return Interval{g.lo, g.hi}; },
                          [](const Linear& l) { return Interval{l.lo, l.hi}; },
                          [](const Composite& c) {
                              Interval iv{std::numeric_limits<double>::infinity(), 0.0};
                              for (const auto& p : c.parts) {
                                  iv.lo = std::min(iv.lo, p.support().lo);
                                  iv.hi = std::max(iv.hi, p.support().hi);
                              }
                              return iv;
                          },
                      },
                      *base_);
}

double Potential::base_value(double s) const noexcept {
    return std::visit(Overloaded{
                          [s](const Step& st) { return (s >= st.lo && s <= st.hi) ? st.height : 0.0; },
                          [s](const Bump& b) {
                              if (!(s > b.lo && s < b.hi)) return 0.0;
                              return b.amplitude * std::exp(-b.sharpness / (s - b.lo) - b.sharpness / (b.hi - s));
                          },
                          [s](const Gaussian& g) {
                              if (!(s >= g.lo && s <= g.hi)) return 0.0;
                              const double z = (s - g.center) / g.width;
                              return g.amplitude * std::exp(-0.5 * z * z);
                          },
                          [s](const Linear& l) {
                              if (!(s >= l.lo && s <= l.hi)) return 0.0;
                              const double v = interpolate(l.knots, s);
                              return l.clamp ? std::max(0.0, v) : v;
                          },
                          [s](const Composite& c) {
                              double sum = 0.0;
                              for (const auto& p : c.parts) sum += p.value(s);
                              return sum;
                          },
                      },
                      *base_);
}

double Potential::value(double x) const noexcept {
    if (!(x > 0.0)) return 0.0;
    const double s = xscale_ * x;
    if (s < window_.lo || s > window_.hi) return 0.0;
    return factor_ * base_value(s);
}

double Potential::operator()(double x) const {
    if (!(x > 0.0)) {
        std::ostringstream os;
        os << "potential evaluated at non-positive x = " << x;
        throw DomainError(os.str());
    }
    return value(x);
}

Interval Potential::support() const {
    const Interval b = base_support();
    const double lo = std::max(b.lo, window_.lo);
    const double hi = std::min(b.hi, window_.hi);
    return {lo / xscale_, hi / xscale_};
}

std::vector<double> Potential::breakpoints() const {
    std::vector<double> pts;
    std::visit(Overloaded{
                   [&](const Step& s) { pts = {s.lo, s.hi}; },
                   [&](const Bump& b) { pts = {b.lo, b.hi}; },
                   [&](const Gaussian& g) {
                       pts = {g.lo, g.hi};
                       if (g.center > g.lo && g.center < g.hi) pts.push_back(g.center);
                   },
                   [&](const Linear& l) {
                       pts = {l.lo, l.hi};
                       for (std::size_t i = 0; i < l.knots.size(); ++i) {
                           pts.push_back(l.knots[i].first);
                           // Clamping introduces a kink where the interpolant crosses zero.
                           if (l.clamp && i + 1 < l.knots.size()) {
                               const auto& [x0, v0] = l.knots[i];
                               const auto& [x1, v1] = l.knots[i + 1];
                               if ((v0 < 0.0) != (v1 < 0.0)) pts.push_back(x0 + (x1 - x0) * v0 / (v0 - v1));
                           }
                       }
                   },
                   [&](const Composite& c) {
                       for (const auto& p : c.parts) {
                           for (double x : p.breakpoints()) pts.push_back(x);
                       }
                   },
               },
               *base_);
    const Interval sup = support();
    std::vector<double> out;
    out.reserve(pts.size() + 2);
    out.push_back(sup.lo);
    out.push_back(sup.hi);
    for (double s : pts) {
        const double x = s / xscale_;
        if (x > sup.lo && x < sup.hi) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Potential::is_zero() const {
    if (factor_ == 0.0) return true;
    const Interval s = support();
    if (!(s.hi > s.lo)) return true;
    return sup() == 0.0;
}

double Potential::sup_weighted(double k) const {
    const Interval s = support();
    if (!(s.hi > s.lo) || factor_ == 0.0) return 0.0;
    auto f = [&](double x) { return value(x) * std::pow(x, k); };
    const auto bps = breakpoints();
    double best = 0.0;
    double best_x = s.lo;
    double best_lo = s.lo;
    double best_hi = s.hi;
    constexpr int kSamples = 512;
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        const double a = bps[i];
        const double b = bps[i + 1];
        for (int j = 0; j <= kSamples; ++j) {
            const double x = a + (b - a) * j / kSamples;
            const double v = f(x);
            if (v > best) {
                best = v;
                best_x = x;
                best_lo = std::max(a, x - (b - a) / kSamples);
                best_hi = std::min(b, x + (b - a) / kSamples);
            }
        }
    }
    // Golden-section polish around the best sample (no-op at kinks/endpoints).
    double lo = best_lo;
    double hi = best_hi;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 80 && hi - lo > 1e-15 * std::max(1.0, best_x); ++it) {
        const double x1 = hi - g * (hi - lo);
        const double x2 = lo + g * (hi - lo);
        if (f(x1) > f(x2)) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    return std::max(best, f(0.5 * (lo + hi)));
}

Potential Potential::scaled(double lambda) const {
    if (!(lambda > 0.0 && std::isfinite(lambda))) throw DomainError("scale factor must be positive");
    const double l2 = lambda * lambda;
    return Potential(base_, factor_ * l2 * l2, xscale_ * lambda, window_);
}

Potential Potential::dilated(double s) const {
    if (!(s > 0.0 && std::isfinite(s))) throw DomainError("dilation factor must be positive");
    return Potential(base_, factor_, xscale_ * s, window_);
}

Potential Potential::multiplied(double c) const {
    check_nonnegative(c, "potential multiplier");
    return Potential(base_, factor_ * c, xscale_, window_);
}

Potential Potential::restricted(double lo, double hi) const {
    if (!(hi > lo)) throw DomainError("restriction window needs lo < hi");
    Interval w{std::max(window_.lo, lo * xscale_), std::min(window_.hi, hi * xscale_)};
    if (w.hi < w.lo) w = {window_.lo, window_.lo};
    return Potential(base_, factor_, xscale_, w);
}

double weighted_moment(const Potential& v, double p, double nu, double a, double b, std::size_t pieces) {
    if (!(p >= 1.0)) throw DomainError("weighted_moment needs p >= 1");
    if (!(nu >= 0.0 && nu < 3.0)) throw DomainError("weighted_moment needs 0 <= nu < 3");
    const Interval s = v.support();
    const double lo = std::max(a, s.lo);
    const double hi = std::min(b, s.hi);
    if (!(hi > lo) || v.factor() == 0.0) return 0.0;
    std::vector<double> cuts{lo, hi};
    for (double x : v.breakpoints()) {
        if (x > lo && x < hi) cuts.push_back(x);
    }
    std::sort(cuts.begin(), cuts.end());
    auto integrand = [&](double x) {
        const double vx = v.value(x);
        if (vx <= 0.0) return 0.0;
        return std::pow(vx, p) * std::pow(x, nu);
    };
    return integrate_composite(integrand, cuts, pieces);
}

double weighted_moment(const Potential& v, double p, double nu, std::size_t pieces) {
    const Interval s = v.support();
    return weighted_moment(v, p, nu, s.lo, s.hi, pieces);
}

void ExponentSet::validate() const {
    if (!(nu >= 0.0 && nu < 3.0)) {
        std::ostringstream os;
        os << "weight exponent nu must satisfy 0 <= nu < 3; got " << nu;
        throw DomainError(os.str());
    }
    if (!(gamma >= gamma_c())) {
        std::ostringstream os;
        os << "gamma must satisfy gamma >= (3 - nu)/4 = " << gamma_c() << "; got " << gamma;
        throw DomainError(os.str());
    }
}

}  // namespace hrl
