#pragma once

#include <Eigen/Dense>

namespace mreg {

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
// Only the lower triangle of `a` is read. Throws FactorizationError when a
// pivot is not strictly positive or not finite.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& a);

// Solves L L^T x = b by forward and back substitution.
Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& lower, const Eigen::VectorXd& b);

}  // namespace mreg
