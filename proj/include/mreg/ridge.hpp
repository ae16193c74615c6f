#pragma once

#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "mreg/dataset.hpp"
#include "mreg/image.hpp"

namespace mreg {

// Which regularization constant sits on the diagonal of the normal equations.
//
// The ridge loss is ||Xw + b1 - t||^2 + (lambda/2)(||w||^2 + b^2). Its
// stationary point solves the bordered system with lambda/2 on the diagonal
// (kSelfConsistent). kAsPrinted puts lambda itself on the diagonal, which is
// the minimizer of the same loss evaluated at 2*lambda.
enum class RidgeVariant { kSelfConsistent, kAsPrinted };

std::string_view to_string(RidgeVariant variant);
RidgeVariant parse_ridge_variant(std::string_view name);  // "self-consistent" | "printed"

// Diagonal term added to X^T X and to N in the bordered system.
double system_diagonal(double lambda_reg, RidgeVariant variant);

// The lambda at which ridge_loss is minimized by solve_pixel(.., variant).
double equivalent_loss_lambda(double lambda_reg, RidgeVariant variant);

struct RidgeConfig {
  int r = 5;
  double lambda_reg = 1.0;
  RidgeVariant variant = RidgeVariant::kSelfConsistent;

  // Throws Error unless r is odd and >= 1 and lambda_reg > 0.
  void validate() const;
};

void check_lambda(double lambda_reg);

struct PixelSystem {
  Eigen::MatrixXd design;   // N x r^2, row n = receptive field of input n
  Eigen::VectorXd targets;  // N, target intensity at `pixel`
  PixelCoord pixel;
  int channel = 0;
};

struct PixelSolution {
  Eigen::VectorXd weights;  // r^2
  double bias = 0.0;

  Eigen::VectorXd stacked() const;  // [w; b]
  static PixelSolution from_stacked(const Eigen::VectorXd& theta);
  bool finite() const;
};

PixelSystem build_pixel_system(const PairedDataset& ds, int channel, PixelCoord pixel, int r);

/// Closed-form minimizer for one pixel: assembles the (k+1) x (k+1) bordered
/// normal equations
///
///   [ X^T X + d I   X^T 1 ] [w]   [ X^T t ]
///   [ 1^T X         d + N ] [b] = [ 1^T t ]
///
/// with d = system_diagonal(lambda_reg, variant) and solves them by Cholesky.
/// Throws Error for lambda_reg <= 0 and FactorizationError if the system is
/// not positive definite; it never adds extra regularization.
PixelSolution solve_pixel(const PixelSystem& sys, double lambda_reg,
                          RidgeVariant variant = RidgeVariant::kSelfConsistent);

// Same as solve_pixel on a raw design matrix and target vector.
PixelSolution solve_ridge(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                          double lambda_reg, RidgeVariant variant = RidgeVariant::kSelfConsistent);

// ||Xw + b1 - t||^2 + (lambda/2)(||w||^2 + b^2), unaveraged.
double ridge_loss(const PixelSystem& sys, const PixelSolution& sol, double lambda_reg);
double ridge_loss(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                  const PixelSolution& sol, double lambda_reg);

}  // namespace mreg
