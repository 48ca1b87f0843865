#include "hrl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dense.hpp"
#include "hrl/errors.hpp"

namespace hrl {

namespace {

constexpr int kBisectionCap = 200;

double pencil_scale(const SymBandMatrix& a, const SymBandMatrix& b) {
    return std::max(1.0, std::max(a.norm_inf(), b.norm_inf()));
}

void check_pencil(const SymBandMatrix& a, const SymBandMatrix& b) {
    if (a.size() != b.size()) throw DomainError("pencil matrices differ in dimension");
}

struct Bisector {
    const SymBandMatrix& a;
    const SymBandMatrix& b;
    double tol;
    std::size_t steps = 0;
    std::vector<double> values;
    std::vector<bool> cluster;

    std::size_t count(double shift) {
        ++steps;
        return count_below(a, b, shift);
    }

    // Eigenvalues with indices [ca, cb) lie in [lo, hi).
    void split(double lo, double hi, std::size_t ca, std::size_t cb, int depth) {
        if (ca == cb) return;
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi) {
            for (std::size_t i = ca; i < cb; ++i) {
                values.push_back(mid);
                cluster.push_back(cb - ca > 1);
            }
            return;
        }
        if (depth > kBisectionCap) {
            std::ostringstream os;
            os << "eigenvalue bisection exceeded " << kBisectionCap << " steps near " << mid << " (bracket ["
               << lo << ", " << hi << "], indices " << ca << ".." << cb << ")";
            throw NumericalFailure(os.str());
        }
        const std::size_t cm = count(mid);
        split(lo, mid, ca, cm, depth + 1);
        split(mid, hi, cm, cb, depth + 1);
    }
};

}  // namespace

SpectrumResult SpectrumResult::with_gamma(double g) const {
    SpectrumResult out = *this;
    out.gamma = g;
    out.riesz_mean = hrl::riesz_mean(negatives, g);
    return out;
}

std::size_t count_below(const SymBandMatrix& a, const SymBandMatrix& b, double shift) {
    check_pencil(a, b);
    const double scale = pencil_scale(a, b);
    const double deltas[] = {0.0, -1e-12 * scale, 1e-12 * scale};
    for (double d : deltas) {
        const LdltResult r = ldlt_inertia(a.plus(b, -(shift + d)));
        if (r.ok) return r.inertia.negative;
    }
    std::ostringstream os;
    os << "singular pivot persists at shift " << shift << " after perturbation";
    throw NumericalFailure(os.str());
}

std::size_t negative_count(const SymBandMatrix& k, const SymBandMatrix& m_v, const SymBandMatrix& m,
                           double shift) {
    if (k.size() != m_v.size() || k.size() != m.size()) throw DomainError("system matrices differ in dimension");
    return count_below(k.plus(m_v, -1.0), m, shift);
}

SpectrumResult pencil_negative_eigenvalues(const SymBandMatrix& a, const SymBandMatrix& b, double tol) {
    check_pencil(a, b);
    if (!(tol > 0.0)) throw DomainError("eigenvalue tolerance must be positive");
    Bisector bis{a, b, tol, 0, {}, {}};
    SpectrumResult res;
    const std::size_t n0 = bis.count(0.0);
    if (n0 > 0) {
        double lo = -1.0;
        int doublings = 0;
        while (bis.count(lo) > 0) {
            lo *= 2.0;
            if (++doublings > 2000 || !std::isfinite(lo)) throw NumericalFailure("no lower bound for the spectrum");
        }
        bis.split(lo, 0.0, 0, n0, 0);
    }
    res.negatives = std::move(bis.values);
    res.cluster = std::move(bis.cluster);
    for (std::size_t i = 1; i < res.negatives.size(); ++i) {
        if (res.negatives[i] - res.negatives[i - 1] <= tol * std::max(1.0, std::abs(res.negatives[i]))) {
            res.cluster[i] = res.cluster[i - 1] = true;
        }
    }
    res.count = res.negatives.size();
    res.iterations = bis.steps;
    res.riesz_mean = hrl::riesz_mean(res.negatives, res.gamma);
    return res;
}

SpectrumResult negative_eigenvalues(const SymBandMatrix& k, const SymBandMatrix& m_v, const SymBandMatrix& m,
                                    double tol) {
    if (k.size() != m_v.size() || k.size() != m.size()) throw DomainError("system matrices differ in dimension");
    return pencil_negative_eigenvalues(k.plus(m_v, -1.0), m, tol);
}

double riesz_mean(std::span<const double> negatives, double gamma) {
    if (gamma < 0.0) throw DomainError("Riesz exponent must be >= 0");
    double s = 0.0;
    for (double l : negatives) {
        if (!(l < 0.0)) throw DomainError("Riesz mean expects negative eigenvalues");
        s += std::pow(-l, gamma);
    }
    return s;
}

double constrained_min_rayleigh(const SymBandMatrix& k, const SymBandMatrix& m_target,
                                const std::vector<std::vector<double>>& constraints, double rel_tol) {
    check_pencil(k, m_target);
    const std::size_t n = k.size();
    if (n == 0) throw DomainError("empty Rayleigh quotient problem");
    // Jacobi scaling keeps graded meshes (entries over many decades) well conditioned.
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = m_target(i, i) > 0.0 ? m_target(i, i) : std::abs(k(i, i));
        s[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
    }

    if (constraints.empty()) {
        SymBandMatrix ks(n, k.bandwidth());
        SymBandMatrix bs(n, m_target.bandwidth());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i > k.bandwidth() ? i - k.bandwidth() : 0; j <= i; ++j) {
                ks.at(i, j) = s[i] * k(i, j) * s[j];
            }
            for (std::size_t j = i > m_target.bandwidth() ? i - m_target.bandwidth() : 0; j <= i; ++j) {
                bs.at(i, j) = s[i] * m_target(i, j) * s[j];
            }
        }
        if (!is_psd(bs, 0.0) || bs.norm_inf() == 0.0) {
            throw DomainError("target form is not positive definite; quotient undefined");
        }
        // Upper bound from unit vectors, lower bound by doubling.
        double hi = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (bs(i, i) > 0.0) hi = std::min(hi, ks(i, i) / bs(i, i));
        }
        hi = hi + 1e-12 * std::max(1.0, std::abs(hi));
        double step = std::max(1.0, std::abs(hi));
        double lo = hi - step;
        int guard = 0;
        while (count_below(ks, bs, lo) > 0) {
            step *= 2.0;
            lo = hi - step;
            if (++guard > 2000) throw NumericalFailure("Rayleigh quotient is unbounded below");
        }
        for (int it = 0; it < kBisectionCap && hi - lo > rel_tol * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (count_below(ks, bs, mid) > 0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    }

    std::vector<std::vector<double>> scaled = constraints;
    for (auto& c : scaled) {
        if (c.size() != n) throw DomainError("constraint vector has the wrong length");
        for (std::size_t i = 0; i < n; ++i) c[i] *= s[i];
    }
    Eigen::VectorXd sv = Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(n));
    const Eigen::MatrixXd kd = sv.asDiagonal() * detail::to_eigen(k) * sv.asDiagonal();
    const Eigen::MatrixXd bd = sv.asDiagonal() * detail::to_eigen(m_target) * sv.asDiagonal();
    const Eigen::MatrixXd z = detail::null_space(scaled, n);
    const Eigen::MatrixXd kz = z.transpose() * kd * z;
    const Eigen::MatrixXd bz = z.transpose() * bd * z;
    return detail::min_generalized_eigenvalue(0.5 * (kz + kz.transpose()), 0.5 * (bz + bz.transpose()));
}

std::vector<double> dense_generalized_eigenvalues(const SymBandMatrix& a, const SymBandMatrix& b) {
    check_pencil(a, b);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::to_eigen(a), detail::to_eigen(b),
                                                                 Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("dense generalized eigensolver failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

}  // namespace hrl
