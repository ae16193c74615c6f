#include "mreg/ridge.hpp"

#include <cmath>
#include <vector>

#include "mreg/cholesky.hpp"
#include "mreg/error.hpp"

namespace mreg {

std::string_view to_string(RidgeVariant variant) {
  return variant == RidgeVariant::kSelfConsistent ? "self-consistent" : "printed";
}

RidgeVariant parse_ridge_variant(std::string_view name) {
  if (name == "self-consistent") return RidgeVariant::kSelfConsistent;
  if (name == "printed") return RidgeVariant::kAsPrinted;
  throw Error("unknown ridge variant '" + std::string(name) +
              "' (expected self-consistent or printed)");
}

double system_diagonal(double lambda_reg, RidgeVariant variant) {
  return variant == RidgeVariant::kSelfConsistent ? 0.5 * lambda_reg : lambda_reg;
}

double equivalent_loss_lambda(double lambda_reg, RidgeVariant variant) {
  return variant == RidgeVariant::kSelfConsistent ? lambda_reg : 2.0 * lambda_reg;
}

void check_lambda(double lambda_reg) {
  if (!(lambda_reg > 0.0) || !std::isfinite(lambda_reg))
    throw Error("lambda must be positive, got " + std::to_string(lambda_reg));
}

void RidgeConfig::validate() const {
  check_receptive_field_size(r);
  check_lambda(lambda_reg);
}

Eigen::VectorXd PixelSolution::stacked() const {
  Eigen::VectorXd theta(weights.size() + 1);
  theta << weights, bias;
  return theta;
}

PixelSolution PixelSolution::from_stacked(const Eigen::VectorXd& theta) {
  const Eigen::Index k = theta.size() - 1;
  return {theta.head(k), theta(k)};
}

bool PixelSolution::finite() const { return weights.allFinite() && std::isfinite(bias); }

PixelSystem build_pixel_system(const PairedDataset& ds, int channel, PixelCoord pixel, int r) {
  check_receptive_field_size(r);
  if (ds.size() == 0) throw Error("cannot build a pixel system from an empty dataset");
  const Geometry& g = ds.geometry();
  if (channel < 0 || channel >= g.channels)
    throw GeometryError("channel " + std::to_string(channel) + " out of range for " +
                        g.to_string());
  if (!g.contains(pixel.row, pixel.col))
    throw GeometryError("pixel (" + std::to_string(pixel.row) + "," + std::to_string(pixel.col) +
                        ") outside " + g.to_string());

  const auto n = static_cast<Eigen::Index>(ds.size());
  const Eigen::Index k = static_cast<Eigen::Index>(r) * r;
  PixelSystem sys{Eigen::MatrixXd(n, k), Eigen::VectorXd(n), pixel, channel};
  std::vector<double> patch(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < n; ++i) {
    const ImagePair& pair = ds[static_cast<std::size_t>(i)];
    gather_receptive_field(pair.input, channel, pixel, r, patch);
    for (Eigen::Index j = 0; j < k; ++j) sys.design(i, j) = patch[static_cast<std::size_t>(j)];
    sys.targets(i) = pair.target.at(channel, pixel.row, pixel.col);
  }
  return sys;
}

PixelSolution solve_ridge(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                          double lambda_reg, RidgeVariant variant) {
  check_lambda(lambda_reg);
  if (design.rows() != targets.size())
    throw GeometryError("design has " + std::to_string(design.rows()) + " rows but " +
                        std::to_string(targets.size()) + " targets");
  const Eigen::Index n = design.rows();
  const Eigen::Index k = design.cols();
  const double d = system_diagonal(lambda_reg, variant);

  Eigen::MatrixXd system(k + 1, k + 1);
  system.topLeftCorner(k, k).noalias() = design.transpose() * design;
  system.topLeftCorner(k, k).diagonal().array() += d;
  const Eigen::VectorXd column_sums = design.colwise().sum().transpose();
  system.topRightCorner(k, 1) = column_sums;
  system.bottomLeftCorner(1, k) = column_sums.transpose();
  system(k, k) = d + static_cast<double>(n);

  Eigen::VectorXd rhs(k + 1);
  rhs.head(k).noalias() = design.transpose() * targets;
  rhs(k) = targets.sum();

  const Eigen::MatrixXd lower = cholesky_factor(system);
  PixelSolution sol = PixelSolution::from_stacked(cholesky_solve(lower, rhs));
  if (!sol.finite()) throw FactorizationError("ridge solve produced non-finite coefficients");
  return sol;
}

PixelSolution solve_pixel(const PixelSystem& sys, double lambda_reg, RidgeVariant variant) {
  return solve_ridge(sys.design, sys.targets, lambda_reg, variant);
}

double ridge_loss(const Eigen::MatrixXd& design, const Eigen::VectorXd& targets,
                  const PixelSolution& sol, double lambda_reg) {
  if (design.cols() != sol.weights.size() || design.rows() != targets.size())
    throw GeometryError("ridge_loss: dimension mismatch");
  const Eigen::VectorXd residual =
      (design * sol.weights).array() + sol.bias - targets.array();
  return residual.squaredNorm() +
         0.5 * lambda_reg * (sol.weights.squaredNorm() + sol.bias * sol.bias);
}

double ridge_loss(const PixelSystem& sys, const PixelSolution& sol, double lambda_reg) {
  return ridge_loss(sys.design, sys.targets, sol, lambda_reg);
}

}  // namespace mreg
