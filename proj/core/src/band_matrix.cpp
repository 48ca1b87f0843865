#include "hrl/band_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hrl/errors.hpp"

namespace hrl {

SymBandMatrix::SymBandMatrix(std::size_t n, std::size_t kd) : n_(n), kd_(kd), data_(n * (kd + 1), 0.0) {}

SymBandMatrix SymBandMatrix::identity(std::size_t n, std::size_t kd) {
    SymBandMatrix m(n, kd);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

SymBandMatrix SymBandMatrix::diagonal(std::span<const double> d, std::size_t kd) {
    SymBandMatrix m(d.size(), kd);
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = d[i];
    return m;
}

double SymBandMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i < j) std::swap(i, j);
    if (i - j > kd_) return 0.0;
    return data_[i * (kd_ + 1) + (i - j)];
}

double& SymBandMatrix::at(std::size_t i, std::size_t j) {
    if (i < j) std::swap(i, j);
    if (i - j > kd_ || i >= n_) {
        std::ostringstream os;
        os << "band entry (" << i << ", " << j << ") outside bandwidth " << kd_;
        throw DomainError(os.str());
    }
    return data_[i * (kd_ + 1) + (i - j)];
}

std::vector<double> SymBandMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw DomainError("band multiply: dimension mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = &data_[i * (kd_ + 1)];
        y[i] += row[0] * x[i];
        const std::size_t jmin = i > kd_ ? i - kd_ : 0;
        for (std::size_t j = jmin; j < i; ++j) {
            const double a = row[i - j];
            y[i] += a * x[j];
            y[j] += a * x[i];
        }
    }
    return y;
}

double SymBandMatrix::form(std::span<const double> x, std::span<const double> y) const {
    const auto ay = multiply(y);
    double s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += x[i] * ay[i];
    return s;
}

SymBandMatrix SymBandMatrix::plus(const SymBandMatrix& other, double s) const {
    if (other.n_ != n_) throw DomainError("band plus: dimension mismatch");
    SymBandMatrix out(n_, std::max(kd_, other.kd_));
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t d = 0; d <= kd_ && d <= i; ++d) out.at(i, i - d) += (*this)(i, i - d);
        for (std::size_t d = 0; d <= other.kd_ && d <= i; ++d) out.at(i, i - d) += s * other(i, i - d);
    }
    return out;
}

SymBandMatrix SymBandMatrix::scaled(double s) const {
    SymBandMatrix out = *this;
    for (double& v : out.data_) v *= s;
    return out;
}

double SymBandMatrix::norm_inf() const {
    double best = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double row = 0.0;
        const std::size_t jmin = i > kd_ ? i - kd_ : 0;
        const std::size_t jmax = std::min(n_ - 1, i + kd_);
        for (std::size_t j = jmin; j <= jmax; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

std::vector<double> SymBandMatrix::diag() const {
    std::vector<double> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = data_[i * (kd_ + 1)];
    return d;
}

SymBandMatrix SymBandMatrix::trimmed(std::size_t front, std::size_t back) const {
    if (front + back > n_) throw DomainError("band trim removes more rows than exist");
    const std::size_t m = n_ - front - back;
    SymBandMatrix out(m, kd_);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t d = 0; d <= kd_ && d <= i; ++d) out.at(i, i - d) = (*this)(i + front, i + front - d);
    }
    return out;
}

std::vector<double> SymBandMatrix::to_dense() const {
    std::vector<double> a(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t jmin = i > kd_ ? i - kd_ : 0;
        for (std::size_t j = jmin; j <= i; ++j) {
            const double v = (*this)(i, j);
            a[i * n_ + j] = v;
            a[j * n_ + i] = v;
        }
    }
    return a;
}

LdltResult ldlt_inertia(const SymBandMatrix& a, double pivot_floor) {
    const std::size_t n = a.size();
    const std::size_t kd = a.bandwidth();
    LdltResult res;
    if (n == 0) return res;
    // l[i * kd + (i - j - 1)] holds L(i, j) for j in [i - kd, i).
    std::vector<double> l(n * std::max<std::size_t>(kd, 1), 0.0);
    std::vector<double> d(n, 0.0);
    auto L = [&](std::size_t i, std::size_t j) -> double& { return l[i * kd + (i - j - 1)]; };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jmin = i > kd ? i - kd : 0;
        double rowscale = 0.0;
        const std::size_t jmax = std::min(n - 1, i + kd);
        for (std::size_t j = jmin; j <= jmax; ++j) rowscale += std::abs(a(i, j));
        for (std::size_t j = jmin; j < i; ++j) {
            double s = a(i, j);
            for (std::size_t k = jmin; k < j; ++k) s -= L(i, k) * L(j, k) * d[k];
            L(i, j) = s / d[j];
        }
        double di = a(i, i);
        for (std::size_t k = jmin; k < i; ++k) di -= L(i, k) * L(i, k) * d[k];
        if (!std::isfinite(di)) throw NumericalFailure("LDL^T factorization produced a non-finite pivot");
        if (std::abs(di) <= pivot_floor * rowscale || di == 0.0) {
            res.ok = false;
            ++res.inertia.zero;
            // Keep going with a tiny pivot of consistent sign so the count stays usable.
            di = (di < 0.0 ? -1.0 : 1.0) * std::max(pivot_floor * rowscale, 1e-300);
        } else if (di < 0.0) {
            ++res.inertia.negative;
        } else {
            ++res.inertia.positive;
        }
        d[i] = di;
    }
    return res;
}

std::vector<double> cholesky_solve(const SymBandMatrix& a, std::span<const double> b) {
    const std::size_t n = a.size();
    const std::size_t kd = a.bandwidth();
    if (b.size() != n) throw DomainError("cholesky_solve: dimension mismatch");
    // c[i * (kd + 1) + (i - j)] = C(i, j), A = C C^T.
    std::vector<double> c(n * (kd + 1), 0.0);
    auto C = [&](std::size_t i, std::size_t j) -> double& { return c[i * (kd + 1) + (i - j)]; };
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jmin = i > kd ? i - kd : 0;
        for (std::size_t j = jmin; j < i; ++j) {
            double s = a(i, j);
            for (std::size_t k = jmin; k < j; ++k) s -= C(i, k) * C(j, k);
            C(i, j) = s / C(j, j);
        }
        double s = a(i, i);
        for (std::size_t k = jmin; k < i; ++k) s -= C(i, k) * C(i, k);
        if (!(s > 0.0)) throw NumericalFailure("banded Cholesky: matrix is not positive definite");
        C(i, i) = std::sqrt(s);
    }
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jmin = i > kd ? i - kd : 0;
        for (std::size_t j = jmin; j < i; ++j) x[i] -= C(i, j) * x[j];
        x[i] /= C(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        const std::size_t jmax = std::min(n - 1, ii + kd);
        for (std::size_t j = ii + 1; j <= jmax; ++j) x[ii] -= C(j, ii) * x[j];
        x[ii] /= C(ii, ii);
    }
    return x;
}

bool is_psd(const SymBandMatrix& a, double rel_tol) {
    const std::size_t n = a.size();
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = std::abs(a(i, i));
        s[i] = d > 0.0 ? 1.0 / std::sqrt(d) : 1.0;
    }
    SymBandMatrix b(n, a.bandwidth());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jmin = i > a.bandwidth() ? i - a.bandwidth() : 0;
        for (std::size_t j = jmin; j <= i; ++j) b.at(i, j) = s[i] * a(i, j) * s[j];
        b.at(i, i) += rel_tol;
    }
    return ldlt_inertia(b, 0.0).inertia.negative == 0;
}

}  // namespace hrl
