#include "hrl/sphere3d.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "hrl/errors.hpp"
#include "hrl/parallel.hpp"

namespace hrl {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.n), static_cast<Eigen::Index>(m.n));
    for (std::size_t i = 0; i < m.n; ++i) {
        for (std::size_t j = 0; j < m.n; ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    }
    return out;
}

double min_eigenvalue(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver failed");
    return es.eigenvalues()(0);
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (d == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

Rational operator+(Rational a, Rational b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rational operator-(Rational a, Rational b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Rational operator*(Rational a, Rational b) { return {a.num * b.num, a.den * b.den}; }
Rational operator/(Rational a, Rational b) { return {a.num * b.den, a.den * b.num}; }

ChannelSpec ChannelSpec::make(int n, bool single_copy) {
    if (n < 0) throw DomainError("channel index must be >= 0");
    ChannelSpec ch;
    ch.n = n;
    ch.c = static_cast<std::int64_t>(n) * (n + 1);
    ch.multiplicity = single_copy ? 1 : 2 * n + 1;
    const Rational c(ch.c);
    ch.hardy_remainder = c * c - Rational(3, 2) * c + Rational(9, 16);
    return ch;
}

Rational epsilon_split() { return Rational(1) / (Rational(1) + Rational(9, 16)); }

const SphereGrid& lebedev26() {
    static const SphereGrid grid = [] {
        SphereGrid g;
        const double a = 1.0 / std::sqrt(2.0);
        const double b = 1.0 / std::sqrt(3.0);
        for (int axis = 0; axis < 3; ++axis) {
            for (double s : {1.0, -1.0}) {
                std::array<double, 3> p{0.0, 0.0, 0.0};
                p[static_cast<std::size_t>(axis)] = s;
                g.points.push_back(p);
                g.weights.push_back(kFourPi / 21.0);
            }
        }
        for (double s : {a, -a}) {
            for (double t : {a, -a}) {
                g.points.push_back({s, t, 0.0});
                g.points.push_back({s, 0.0, t});
                g.points.push_back({0.0, s, t});
                for (int k = 0; k < 3; ++k) g.weights.push_back(kFourPi * 4.0 / 105.0);
            }
        }
        for (double x : {b, -b}) {
            for (double y : {b, -b}) {
                for (double z : {b, -b}) {
                    g.points.push_back({x, y, z});
                    g.weights.push_back(kFourPi * 9.0 / 280.0);
                }
            }
        }
        return g;
    }();
    return grid;
}

RadialPotential RadialPotential::radial(Potential profile) {
    RadialPotential v;
    v.profile = std::move(profile);
    return v;
}

RadialPotential RadialPotential::with_angular(Potential profile,
                                              const std::function<double(const std::array<double, 3>&)>& f,
                                              const SphereGrid& grid) {
    RadialPotential v;
    v.profile = std::move(profile);
    v.grid = grid;
    std::vector<double> samples;
    for (const auto& p : grid.points) {
        const double s = f(p);
        if (!(std::isfinite(s) && s >= 0.0)) throw DomainError("angular factor must be finite and nonnegative");
        samples.push_back(s);
    }
    v.angular = std::move(samples);
    return v;
}

double RadialPotential::angular_mean(double power) const {
    if (!angular) return 1.0;
    double s = 0.0;
    double w = 0.0;
    for (std::size_t q = 0; q < grid.size(); ++q) {
        s += grid.weights[q] * std::pow((*angular)[q], power);
        w += grid.weights[q];
    }
    return s / w;
}

int channel_cutoff(const Potential& profile) {
    if (profile.is_zero()) return -1;
    const double s = profile.sup_weighted(4.0);
    int n = -1;
    for (int k = 0;; ++k) {
        const double c = static_cast<double>(k) * (k + 1);
        if (c * c - 1.5 * c >= s) break;
        n = k;
        if (k > 1000000) throw NumericalFailure("channel cutoff does not terminate");
    }
    return n;
}

Potential radial_average(const RadialPotential& v) {
    const double m = v.angular_mean(1.0);
    return m == 1.0 ? v.profile : v.profile.multiplied(m);
}

HolderCheck holder_check(const RadialPotential& v, double gamma, std::size_t samples) {
    const double p = gamma + 0.75;
    const Interval s = v.profile.support();
    HolderCheck h;
    h.samples = samples;
    const double mean = v.angular_mean(1.0);
    const double mean_p = v.angular_mean(p);
    for (std::size_t k = 0; k < samples; ++k) {
        const double r = s.lo + s.length() * static_cast<double>(k) / static_cast<double>(samples - 1);
        const double prof = v.profile.value(r);
        const double left = std::pow(prof * mean, p);
        const double right = std::pow(prof, p) * mean_p;
        const double scale = std::max({left, right, 1e-300});
        h.worst_excess = std::max(h.worst_excess, (left - right) / scale);
    }
    h.pass = h.worst_excess <= 1e-12;
    return h;
}

SpectrumResult solve_channel(const ChannelSpec& ch, const Potential& v, const Mesh& mesh, double tol) {
    return solve_halfline(FormSpec::channel(static_cast<double>(ch.c), critical_hardy()), v, mesh, tol);
}

Report3d verify_3d(const RadialPotential& v3, double gamma, const Options3d& opt,
                   std::optional<double> theoretical_C) {
    if (!(gamma >= 0.25)) {
        std::ostringstream os;
        os << "the 3D inequality needs gamma >= 1/4 (got " << gamma << ")";
        throw DomainError(os.str());
    }
    const auto t0 = std::chrono::steady_clock::now();
    const Potential v = radial_average(v3);
    const Mesh mesh = halfline_mesh(v3.profile, opt.mesh);
    Report3d out;
    out.n_max = channel_cutoff(v);
    const int last = out.n_max + std::max(0, opt.extra_channels);
    const std::size_t nch = static_cast<std::size_t>(last + 1);
    const auto spectra = parallel_map(
        nch,
        [&](std::size_t i) { return solve_channel(ChannelSpec::make(static_cast<int>(i)), v, mesh, opt.tol); },
        opt.threads);
    double lhs = 0.0;
    std::vector<double> all;
    for (std::size_t i = 0; i < nch; ++i) {
        const ChannelSpec ch = ChannelSpec::make(static_cast<int>(i), opt.single_copy);
        ChannelRow row;
        row.n = ch.n;
        row.c = ch.c;
        row.multiplicity = ch.multiplicity;
        row.count = spectra[i].count;
        row.riesz_mean = riesz_mean(spectra[i].negatives, gamma);
        row.included = ch.n <= out.n_max;
        row.eigenvalues = spectra[i].negatives;
        if (row.included) {
            lhs += ch.multiplicity * row.riesz_mean;
            for (int m = 0; m < ch.multiplicity; ++m) all.insert(all.end(), row.eigenvalues.begin(), row.eigenvalues.end());
        } else if (row.count != 0) {
            out.cutoff_verified = false;
        }
        out.channels.push_back(std::move(row));
    }
    std::sort(all.begin(), all.end());

    VerificationReport& r = out.report;
    r.family = "bilaplacian_hardy_3d";
    r.hardy = critical_hardy();
    r.nu = 2.0;
    r.gamma = gamma;
    r.rhs_exponent = gamma + 0.75;
    r.lhs = lhs;
    r.rhs = kFourPi * v3.angular_mean(r.rhs_exponent) * weighted_moment(v3.profile, r.rhs_exponent, 2.0);
    r.count = all.size();
    r.eigenvalues = std::move(all);
    r.mesh = describe(mesh);
    r.theoretical_C = theoretical_C;
    r.finish();
    r.pass = r.pass && out.cutoff_verified;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

double channel_rayleigh(const ChannelSpec& ch, const Mesh& mesh) {
    const auto sys = assemble(FormSpec::channel(static_cast<double>(ch.c), 0.0), mesh, BoundaryCondition::clamped_left);
    return constrained_min_rayleigh(sys.K_principal, sys.M_hardy);
}

std::vector<EpsilonSplitRow> epsilon_split_check(std::span<const int> ns, const Mesh& mesh) {
    const Rational eps = epsilon_split();
    const double one_minus = (Rational(1) - eps).value();
    std::vector<EpsilonSplitRow> rows;
    for (int n : ns) {
        if (n < 1) throw DomainError("epsilon split check needs n >= 1");
        const ChannelSpec ch = ChannelSpec::make(n);
        const auto sys =
            assemble(FormSpec::channel(static_cast<double>(ch.c), 0.0), mesh, BoundaryCondition::clamped_left);
        const SymBandMatrix a = sys.K_principal.scaled(one_minus).plus(sys.M_hardy, -critical_hardy());
        EpsilonSplitRow row;
        row.n = n;
        row.margin = constrained_min_rayleigh(a, sys.M_hardy);
        row.exact_margin = (Rational(1) - eps) * ch.hardy_remainder - Rational(9, 16);
        row.psd = row.margin >= -1e-9;
        rows.push_back(row);
    }
    return rows;
}

ClassicalHardy classical_hardy_quotients(const Mesh& mesh) {
    const auto quotient = [&](double p) {
        const SymBandMatrix k = assemble_kernel(mesh, slope_weight_kernel(-p)).trimmed(2, 0);
        const SymBandMatrix m = assemble_kernel(mesh, value_weight_kernel(-p - 2.0)).trimmed(2, 0);
        return constrained_min_rayleigh(k, m);
    };
    return {quotient(0.0), quotient(2.0)};
}

DenseMatrix DenseMatrix::zero(std::size_t n) { return {n, std::vector<double>(n * n, 0.0)}; }

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m = zero(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool cross_term_bound_check(const DenseMatrix& w, const DenseMatrix& p1, const DenseMatrix& p2) {
    if (w.n != p1.n || w.n != p2.n) throw DomainError("cross-term matrices differ in dimension");
    const Eigen::MatrixXd W = to_eigen(w);
    const Eigen::MatrixXd P1 = to_eigen(p1);
    const Eigen::MatrixXd P2 = to_eigen(p2);
    const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
    if (w.n > 0 && min_eigenvalue(W) < -1e-12 * scale) throw DomainError("cross-term check needs W >= 0");
    if (w.n == 0) return true;
    const Eigen::MatrixXd d = P1 * W * P1 + P2 * W * P2 - (P1 * W * P2 + P2 * W * P1);
    return min_eigenvalue(d) >= -1e-12 * scale;
}

std::array<double, 9> real_harmonics(const std::array<double, 3>& p) {
    const double x = p[0], y = p[1], z = p[2];
    const double pi = std::numbers::pi;
    const double c0 = 0.5 / std::sqrt(pi);
    const double c1 = std::sqrt(3.0 / (4.0 * pi));
    const double c2 = 0.5 * std::sqrt(15.0 / pi);
    const double c20 = 0.25 * std::sqrt(5.0 / pi);
    const double c22 = 0.25 * std::sqrt(15.0 / pi);
    return {c0, c1 * y, c1 * z, c1 * x, c2 * x * y, c2 * y * z, c20 * (3.0 * z * z - 1.0), c2 * x * z,
            c22 * (x * x - y * y)};
}

DenseMatrix angular_multiplication_matrix(const RadialPotential& v) {
    DenseMatrix m = DenseMatrix::zero(9);
    for (std::size_t q = 0; q < v.grid.size(); ++q) {
        const double f = v.angular ? (*v.angular)[q] : 1.0;
        const auto y = real_harmonics(v.grid.points[q]);
        for (std::size_t i = 0; i < 9; ++i) {
            for (std::size_t j = 0; j < 9; ++j) m(i, j) += v.grid.weights[q] * f * y[i] * y[j];
        }
    }
    return m;
}

std::pair<DenseMatrix, DenseMatrix> channel_projections() {
    DenseMatrix p1 = DenseMatrix::zero(9);
    p1(0, 0) = 1.0;
    DenseMatrix p2 = DenseMatrix::identity(9);
    p2(0, 0) = 0.0;
    return {p1, p2};
}

}  // namespace hrl
