#include "mreg/oracles.hpp"

#include <cmath>
#include <string>

#include "mreg/error.hpp"

namespace mreg {

PixelSolution gradient_descent_oracle(const PixelSystem& sys, double lambda_reg, int steps,
                                      double step_size, const GradientDescentOptions& options) {
  check_lambda(lambda_reg);
  if (!(step_size > 0.0)) throw Error("step size must be positive");
  const double lam = equivalent_loss_lambda(lambda_reg, options.variant);
  const Eigen::MatrixXd& x = sys.design;
  const Eigen::VectorXd& t = sys.targets;
  const int window = options.divergence_window > 0 ? options.divergence_window : 100;

  PixelSolution sol{Eigen::VectorXd::Zero(x.cols()), 0.0};
  double window_start_loss = ridge_loss(sys, sol, lam);
  Eigen::VectorXd residual(x.rows());
  Eigen::VectorXd grad_w(x.cols());
  for (int step = 1; step <= steps; ++step) {
    residual.noalias() = x * sol.weights;
    residual.array() += sol.bias - t.array();
    grad_w.noalias() = 2.0 * x.transpose() * residual;
    grad_w += lam * sol.weights;
    const double grad_b = 2.0 * residual.sum() + lam * sol.bias;

    if (options.gradient_tolerance > 0.0 &&
        std::max(grad_w.cwiseAbs().maxCoeff(), std::abs(grad_b)) <= options.gradient_tolerance)
      break;

    sol.weights -= step_size * grad_w;
    sol.bias -= step_size * grad_b;

    if (step % window == 0) {
      const double loss = ridge_loss(sys, sol, lam);
      if (!std::isfinite(loss) || loss > window_start_loss + 1e-12 * (1.0 + window_start_loss))
        throw DivergenceError("gradient descent diverged at step " + std::to_string(step) +
                              " (loss " + std::to_string(loss) + " > " +
                              std::to_string(window_start_loss) + ")");
      window_start_loss = loss;
    }
  }
  return sol;
}

double safe_step_size(const PixelSystem& sys, double lambda_reg, RidgeVariant variant) {
  const double lam = equivalent_loss_lambda(lambda_reg, variant);
  const double frob = sys.design.squaredNorm() + static_cast<double>(sys.design.rows());
  return 1.0 / (2.0 * frob + lam);
}

Eigen::VectorXd finite_difference_gradient(const PixelSystem& sys, const PixelSolution& sol,
                                           double lambda_reg, double step) {
  const Eigen::VectorXd theta = sol.stacked();
  Eigen::VectorXd grad(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd plus = theta;
    Eigen::VectorXd minus = theta;
    plus(i) += step;
    minus(i) -= step;
    grad(i) = (ridge_loss(sys, PixelSolution::from_stacked(plus), lambda_reg) -
               ridge_loss(sys, PixelSolution::from_stacked(minus), lambda_reg)) /
              (2.0 * step);
  }
  return grad;
}

PixelSolution dense_ridge_solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                                double lambda_reg, RidgeVariant variant) {
  check_lambda(lambda_reg);
  const Eigen::Index n = design.rows();
  const Eigen::Index k = design.cols();
  // Augmented design [X 1]: the bordered system is X~^T X~ + d I.
  Eigen::MatrixXd augmented(n, k + 1);
  augmented << design, Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd system = augmented.transpose() * augmented;
  system.diagonal().array() += system_diagonal(lambda_reg, variant);
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(system);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw FactorizationError("dense ridge system is not positive definite");
  const Eigen::VectorXd theta = ldlt.solve(augmented.transpose() * targets);
  return PixelSolution::from_stacked(theta);
}

DenseSolution dense_ridge_oracle(const PairedDataset& ds, int channel, PixelCoord pixel,
                                 double lambda_reg, RidgeVariant variant) {
  const Geometry& g = ds.geometry();
  if (g.plane_size() > kDenseOracleMaxPixels)
    throw Error("dense ridge system too large: " + std::to_string(g.plane_size()) +
                " pixels per plane exceeds " + std::to_string(kDenseOracleMaxPixels));
  if (channel < 0 || channel >= g.channels || !g.contains(pixel.row, pixel.col))
    throw GeometryError("dense oracle: channel/pixel outside " + g.to_string());

  const auto n = static_cast<Eigen::Index>(ds.size());
  const auto mn = static_cast<Eigen::Index>(g.plane_size());
  Eigen::MatrixXd design(n, mn);
  Eigen::VectorXd targets(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ImagePair& pair = ds[static_cast<std::size_t>(i)];
    const std::span<const double> plane = pair.input.plane(channel);
    for (Eigen::Index j = 0; j < mn; ++j) design(i, j) = plane[static_cast<std::size_t>(j)];
    targets(i) = pair.target.at(channel, pixel.row, pixel.col);
  }
  const PixelSolution sol = dense_ridge_solve(design, targets, lambda_reg, variant);
  return {sol.weights, sol.bias, Geometry{g.height, g.width, 1}};
}

}  // namespace mreg
