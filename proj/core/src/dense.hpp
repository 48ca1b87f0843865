#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hrl/band_matrix.hpp"

namespace hrl::detail {

Eigen::MatrixXd to_eigen(const SymBandMatrix& a);

/// Orthonormal basis (columns) of {u : c.u = 0 for all rows c}.
Eigen::MatrixXd null_space(const std::vector<std::vector<double>>& constraints, std::size_t n);

/// Smallest eigenvalue of (A, B) on dense matrices, B positive definite after
/// Jacobi scaling; throws DomainError when B is not.
double min_generalized_eigenvalue(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace hrl::detail
