#include "dense.hpp"

#include <cmath>

#include "hrl/errors.hpp"

namespace hrl::detail {

Eigen::MatrixXd to_eigen(const SymBandMatrix& a) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    const std::size_t kd = a.bandwidth();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t jmin = i > kd ? i - kd : 0;
        for (std::size_t j = jmin; j <= i; ++j) {
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            out(ii, jj) = out(jj, ii) = a(i, j);
        }
    }
    return out;
}

Eigen::MatrixXd null_space(const std::vector<std::vector<double>>& constraints, std::size_t n) {
    const auto nn = static_cast<Eigen::Index>(n);
    const auto m = static_cast<Eigen::Index>(constraints.size());
    if (m == 0) return Eigen::MatrixXd::Identity(nn, nn);
    if (m >= nn) throw DomainError("more constraints than degrees of freedom");
    Eigen::MatrixXd ct(nn, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto& c = constraints[static_cast<std::size_t>(j)];
        if (c.size() != n) throw DomainError("constraint vector has the wrong length");
        for (Eigen::Index i = 0; i < nn; ++i) ct(i, j) = c[static_cast<std::size_t>(i)];
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(ct);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    double rmax = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) rmax = std::max(rmax, std::abs(r(j, j)));
    for (Eigen::Index j = 0; j < m; ++j) {
        if (!(std::abs(r(j, j)) > 1e-12 * rmax)) throw DomainError("constraints are linearly dependent");
    }
    const Eigen::MatrixXd q = qr.householderQ();
    return q.rightCols(nn - m);
}

double min_generalized_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::Index n = a.rows();
    if (n == 0) throw DomainError("empty eigenproblem");
    Eigen::VectorXd s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(b(i, i) > 0.0)) throw DomainError("target form vanishes on the feasible subspace; quotient undefined");
        s(i) = 1.0 / std::sqrt(b(i, i));
    }
    const Eigen::MatrixXd as = s.asDiagonal() * a * s.asDiagonal();
    const Eigen::MatrixXd bs = s.asDiagonal() * b * s.asDiagonal();
    Eigen::LLT<Eigen::MatrixXd> llt(bs);
    if (llt.info() != Eigen::Success) {
        throw DomainError("target form is not positive definite on the feasible subspace; quotient undefined");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(as, bs, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalFailure("dense generalized eigensolver did not converge");
    return es.eigenvalues()(0);
}

}  // namespace hrl::detail
