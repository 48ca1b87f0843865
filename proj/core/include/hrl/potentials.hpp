#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

namespace hrl {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

enum class PotentialKind { step, bump, gaussian_truncated, piecewise_linear, tabulated, composite };

const char* to_string(PotentialKind kind);

/// Nonnegative, bounded potential with compact support inside (0, inf).
///
/// A Potential is an immutable value. Every instance is a base profile
/// (one of the kinds above, in its own coordinates) composed with an
/// amplitude factor, a dilation x -> xscale * x, and a clipping window:
///
///     V(x) = factor * base(xscale * x)   for xscale * x in window,
///     V(x) = 0                           otherwise.
///
/// This keeps the family closed under scale(), restricted() and
/// multiplied() without re-deriving kind-specific parameters.
class Potential {
public:
    struct Step {
        double lo, hi, height;
    };
    /// amplitude * exp(-sharpness/(x-lo) - sharpness/(hi-x)) on (lo, hi).
    struct Bump {
        double lo, hi, amplitude, sharpness;
    };
    struct Gaussian {
        double lo, hi, amplitude, center, width;
    };
    /// Linear interpolation of knots; `clamp` maps negative values to zero.
    struct Linear {
        std::vector<std::pair<double, double>> knots;
        double lo, hi;
        bool clamp;
    };
    struct Composite {
        std::vector<Potential> parts;
    };

    /// The identically zero potential (reported support [1, 2]).
    static Potential zero();
    static Potential step(double lo, double hi, double height);
    static Potential bump(double lo, double hi, double amplitude = 1.0, double sharpness = 1.0);
    static Potential gaussian(double lo, double hi, double amplitude, double center, double width);
    /// Knot values must be nonnegative.
    static Potential piecewise_linear(std::vector<std::pair<double, double>> knots);
    /// Samples are interpolated linearly and clamped at zero; V vanishes
    /// outside [lo, hi] and outside the sampled range.
    static Potential tabulated(double lo, double hi, std::vector<std::pair<double, double>> samples);
    static Potential composite(std::vector<Potential> parts);

    PotentialKind kind() const;

    /// V(x); throws DomainError for x <= 0.
    double operator()(double x) const;
    /// V(x) without the domain check; 0 for x <= 0.
    double value(double x) const noexcept;

    Interval support() const;
    /// Sorted points where V may fail to be smooth, including support ends.
    std::vector<double> breakpoints() const;

    bool is_zero() const;
    /// sup_x V(x) x^k over the support.
    double sup_weighted(double k) const;
    double sup() const { return sup_weighted(0.0); }

    /// lambda^4 V(lambda x).
    Potential scaled(double lambda) const;
    /// V(s x), no amplitude change.
    Potential dilated(double s) const;
    /// c V(x), c >= 0.
    Potential multiplied(double c) const;
    /// V restricted to [lo, hi] (zero elsewhere).
    Potential restricted(double lo, double hi) const;

    // Introspection, used by serialization.
    using Base = std::variant<Step, Bump, Gaussian, Linear, Composite>;
    const Base& base() const { return *base_; }
    double factor() const { return factor_; }
    double xscale() const { return xscale_; }
    Interval window() const { return window_; }

private:
    Potential(std::shared_ptr<const Base> base, double factor, double xscale, Interval window);

    double base_value(double s) const noexcept;
    Interval base_support() const;

    std::shared_ptr<const Base> base_;
    double factor_ = 1.0;
    double xscale_ = 1.0;
    Interval window_;  // base coordinates
};

/// int_0^inf V(x)^p x^nu dx by composite 16-point Gauss quadrature over
/// cells aligned to V's breakpoints, each split into `pieces` sub-cells.
double weighted_moment(const Potential& v, double p, double nu, std::size_t pieces = 64);

/// Same integrand restricted to [a, b].
double weighted_moment(const Potential& v, double p, double nu, double a, double b,
                       std::size_t pieces = 64);

/// Weight exponents for a trace inequality.
struct ExponentSet {
    double nu = 0.0;
    double gamma = 0.0;

    double gamma_c() const { return (3.0 - nu) / 4.0; }
    /// gamma + (1 + nu)/4, used for the Hardy-critical statements.
    double hardy_rhs_exponent() const { return gamma + (1.0 + nu) / 4.0; }
    /// 1 + gamma - gamma_c, the lifted exponent for the general family.
    double general_rhs_exponent() const { return 1.0 + gamma - gamma_c(); }

    /// Throws DomainError unless 0 <= nu < 3 and gamma >= gamma_c.
    void validate() const;
};

}  // namespace hrl
