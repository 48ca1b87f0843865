#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hrl/halfline.hpp"
#include "hrl/potentials.hpp"

namespace hrl {

/// Exact rational p/q, q > 0, always reduced.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d = 1);

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Angular momentum channel n: c = n(n+1), multiplicity 2n+1 (or 1 for the
/// literal one-function-per-degree enumeration).
struct ChannelSpec {
    int n = 0;
    std::int64_t c = 0;
    int multiplicity = 1;
    /// c^2 - (3/2) c + 9/16, the channel's Hardy constant.
    Rational hardy_remainder;

    static ChannelSpec make(int n, bool single_copy = false);
};

/// The split parameter 1 / (1 + 9/16) = 16/25.
Rational epsilon_split();

/// Quadrature on the unit sphere; weights sum to 4 pi.
struct SphereGrid {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;

    std::size_t size() const { return points.size(); }
};

/// 26-point Lebedev rule (exact for polynomials of degree <= 7).
const SphereGrid& lebedev26();

/// V(r theta) = profile(r) * angular(theta); angular sampled on `grid`.
struct RadialPotential {
    Potential profile = Potential::zero();
    std::optional<std::vector<double>> angular;
    SphereGrid grid = lebedev26();

    static RadialPotential radial(Potential profile);
    /// Samples f at the grid points; throws DomainError for negative samples.
    static RadialPotential with_angular(Potential profile, const std::function<double(const std::array<double, 3>&)>& f,
                                        const SphereGrid& grid = lebedev26());
    double angular_mean(double power = 1.0) const;
};

/// Largest n whose channel is not forced nonnegative by c^2 - 1.5c >= sup V r^4;
/// -1 for V = 0.
int channel_cutoff(const Potential& profile);

/// Spherical mean of V(r .) as a radial profile.
Potential radial_average(const RadialPotential& v);

struct HolderCheck {
    double worst_excess = 0.0;
    std::size_t samples = 0;
    bool pass = false;
};

/// Checks mean(V)^p <= mean(V^p), p = gamma + 3/4, at r samples across the support.
HolderCheck holder_check(const RadialPotential& v, double gamma, std::size_t samples = 257);

struct ChannelRow {
    int n = 0;
    std::int64_t c = 0;
    int multiplicity = 1;
    std::size_t count = 0;
    double riesz_mean = 0.0;
    bool included = false;
    std::vector<double> eigenvalues;
};

struct Report3d {
    VerificationReport report;
    std::vector<ChannelRow> channels;
    int n_max = -1;
    /// Channels above the cutoff that were solved and found without negative eigenvalues.
    bool cutoff_verified = true;
};

struct Options3d {
    MeshOptions mesh;
    bool single_copy = false;
    /// Channels beyond n_max solved as a cross-check.
    int extra_channels = 1;
    double tol = 1e-10;
    std::size_t threads = 0;
};

/// Sum over channels n <= n_max of multiplicity * Riesz mean against
/// 4 pi int V^(gamma+3/4) r^2 dr. Non-radial input is averaged first.
Report3d verify_3d(const RadialPotential& v, double gamma, const Options3d& opt = {},
                   std::optional<double> theoretical_C = std::nullopt);

/// Spectrum of one channel (c, 9/16) with potential V on the mesh.
SpectrumResult solve_channel(const ChannelSpec& ch, const Potential& v, const Mesh& mesh, double tol = 1e-10);

struct EpsilonSplitRow {
    int n = 0;
    /// min over u of ((1-eps) square - 9/16 hardy)[u] / hardy[u].
    double margin = 0.0;
    /// (1 - eps) * hardy_remainder - 9/16, exact.
    Rational exact_margin;
    bool psd = false;
};

std::vector<EpsilonSplitRow> epsilon_split_check(std::span<const int> ns, const Mesh& mesh);

/// Discrete minimum of the pure channel square against int |u|^2 / r^4.
double channel_rayleigh(const ChannelSpec& ch, const Mesh& mesh);

struct ClassicalHardy {
    /// min int |u'|^2 / int |u|^2/x^2, bound 1/4
    double first_order = 0.0;
    /// min int |u'|^2/x^2 / int |u|^2/x^4, bound 9/4
    double weighted = 0.0;
};

ClassicalHardy classical_hardy_quotients(const Mesh& mesh);

/// Dense n x n row-major matrices.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> a;

    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
    static DenseMatrix zero(std::size_t n);
    static DenseMatrix identity(std::size_t n);
};

/// PSD-ness of (P1 W P1 + P2 W P2) - (P1 W P2 + P2 W P1). Throws DomainError
/// when W is not PSD.
bool cross_term_bound_check(const DenseMatrix& w, const DenseMatrix& p1, const DenseMatrix& p2);

/// Real spherical harmonics of degree <= 2 at a unit vector (9 values).
std::array<double, 9> real_harmonics(const std::array<double, 3>& x);

/// Matrix of multiplication by the angular factor in the degree <= 2
/// harmonics (9 x 9), via the sphere grid.
DenseMatrix angular_multiplication_matrix(const RadialPotential& v);

/// Projection onto the n = 0 channel and its complement in that basis.
std::pair<DenseMatrix, DenseMatrix> channel_projections();

}  // namespace hrl
