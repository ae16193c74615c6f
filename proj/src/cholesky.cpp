#include "mreg/cholesky.hpp"

#include <cmath>
#include <string>

#include "mreg/error.hpp"

namespace mreg {

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw FactorizationError("Cholesky factorization needs a square matrix");
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      throw FactorizationError("matrix is not positive definite (pivot " + std::to_string(j) +
                               " = " + std::to_string(d) + ")");
    const double ljj = std::sqrt(d);
    lower(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k);
      lower(i, j) = s / ljj;
    }
  }
  return lower;
}

Eigen::VectorXd cholesky_solve(const Eigen::MatrixXd& lower, const Eigen::VectorXd& b) {
  const Eigen::Index n = lower.rows();
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = b(i);
    for (Eigen::Index k = 0; k < i; ++k) s -= lower(i, k) * y(k);
    y(i) = s / lower(i, i);
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = y(i);
    for (Eigen::Index k = i + 1; k < n; ++k) s -= lower(k, i) * x(k);
    x(i) = s / lower(i, i);
  }
  return x;
}

}  // namespace mreg
