#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "mreg/dataset.hpp"
#include "mreg/ridge.hpp"

namespace mreg {

// Verification oracles for the closed-form solver. Each reaches the ridge
// solution by a route that shares no code with solve_pixel's Cholesky path.

struct GradientDescentOptions {
  RidgeVariant variant = RidgeVariant::kSelfConsistent;
  // Stop early once every gradient coordinate is at most this large.
  double gradient_tolerance = 0.0;
  // Loss is compared every `divergence_window` steps; an increase aborts.
  int divergence_window = 100;
};

/// Plain gradient descent on ridge_loss from (w, b) = 0. Minimizes the loss at
/// equivalent_loss_lambda(lambda_reg, variant), so it converges to the same
/// point as solve_pixel(sys, lambda_reg, variant). Throws DivergenceError when
/// the loss grows over a window or becomes non-finite.
PixelSolution gradient_descent_oracle(const PixelSystem& sys, double lambda_reg, int steps,
                                      double step_size, const GradientDescentOptions& options = {});

// 1/L for L an upper bound on the Hessian's largest eigenvalue
// (2 ||[X 1]||_F^2 + lambda'), a step that always converges.
double safe_step_size(const PixelSystem& sys, double lambda_reg,
                      RidgeVariant variant = RidgeVariant::kSelfConsistent);

// Central finite-difference gradient of ridge_loss at `sol`, ordered [w; b].
Eigen::VectorXd finite_difference_gradient(const PixelSystem& sys, const PixelSolution& sol,
                                           double lambda_reg, double step = 1e-5);

inline constexpr std::size_t kDenseOracleMaxPixels = 4096;

struct DenseSolution {
  Eigen::VectorXd weights;  // one per pixel of the channel plane, row-major
  double bias = 0.0;
  Geometry geometry;        // plane geometry (channels = 1)

  double weight_at(int row, int col) const { return weights(row * geometry.width + col); }
};

/// Global-receptive-field ridge regression: the pixel sees every pixel of the
/// input channel plane. Solved with Eigen's LDL^T on the bordered system.
/// Throws Error when height*width exceeds kDenseOracleMaxPixels.
DenseSolution dense_ridge_oracle(const PairedDataset& ds, int channel, PixelCoord pixel,
                                 double lambda_reg,
                                 RidgeVariant variant = RidgeVariant::kSelfConsistent);

// The LDL^T route on an explicit design; used to cross-check designs that
// coincide with a masked system.
PixelSolution dense_ridge_solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                                double lambda_reg,
                                RidgeVariant variant = RidgeVariant::kSelfConsistent);

}  // namespace mreg
