#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hrl {

/// Symmetric band matrix, lower band stored row-wise:
/// entry (i, j) with 0 <= i - j <= kd lives at data[i * (kd + 1) + (i - j)].
class SymBandMatrix {
public:
    SymBandMatrix() = default;
    SymBandMatrix(std::size_t n, std::size_t kd);

    static SymBandMatrix identity(std::size_t n, std::size_t kd = 0);
    static SymBandMatrix diagonal(std::span<const double> d, std::size_t kd = 0);

    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return kd_; }

    bool in_band(std::size_t i, std::size_t j) const {
        return (i >= j ? i - j : j - i) <= kd_;
    }
    /// Entry (i, j); zero outside the band.
    double operator()(std::size_t i, std::size_t j) const;
    /// Mutable reference; (i, j) must be in the band.
    double& at(std::size_t i, std::size_t j);
    void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

    /// y = A x
    std::vector<double> multiply(std::span<const double> x) const;
    /// x^T A y
    double form(std::span<const double> x, std::span<const double> y) const;
    double form(std::span<const double> x) const { return form(x, x); }

    /// this + s * other; bandwidths may differ.
    SymBandMatrix plus(const SymBandMatrix& other, double s = 1.0) const;
    SymBandMatrix scaled(double s) const;
    /// Largest absolute row sum.
    double norm_inf() const;
    std::vector<double> diag() const;

    /// Drops the first `front` and last `back` rows/columns.
    SymBandMatrix trimmed(std::size_t front, std::size_t back) const;

    /// Row-major dense copy (for tests and small projected problems).
    std::vector<double> to_dense() const;

    std::span<const double> raw() const { return data_; }

private:
    std::size_t n_ = 0;
    std::size_t kd_ = 0;
    std::vector<double> data_;
};

/// Signature of a symmetric matrix.
struct Inertia {
    std::size_t negative = 0;
    std::size_t zero = 0;
    std::size_t positive = 0;
};

/// Inertia from an unpivoted LDL^T factorization (Sylvester's law).
///
/// A pivot with |d| <= pivot_floor * (scale of its row) is counted as zero;
/// returns false in `ok` when that happens so callers can perturb and retry.
struct LdltResult {
    Inertia inertia;
    bool ok = true;
};
LdltResult ldlt_inertia(const SymBandMatrix& a, double pivot_floor = 1e-14);

/// Solves A x = b for symmetric positive definite band A (banded Cholesky).
/// Throws NumericalFailure when A is not numerically positive definite.
std::vector<double> cholesky_solve(const SymBandMatrix& a, std::span<const double> b);

/// True iff D^{-1/2} A D^{-1/2} + rel_tol I is positive semidefinite, with
/// D = |diag(A)| (Jacobi scaling makes the tolerance scale-free).
bool is_psd(const SymBandMatrix& a, double rel_tol = 1e-9);

}  // namespace hrl
