#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mreg/dataset.hpp"
#include "mreg/image.hpp"
#include "mreg/ridge.hpp"

namespace mreg {

/// A trained per-pixel, per-channel ridge map for one translation task.
///
/// Every (channel, row, col) owns r*r weights over its replicate-padded
/// receptive field plus a bias. Coefficients are stored contiguously in
/// [channel][row][col] order, r*r + 1 doubles per pixel with the bias last.
class ExpressionLayer {
 public:
  /// Throws GeometryError if the coefficient count does not match the
  /// geometry and Error for a bad r or non-finite coefficients.
  ExpressionLayer(std::string task_name, Geometry geometry, int r, double lambda_reg,
                  std::vector<double> coefficients);

  // w = centre indicator, b = 0.
  static ExpressionLayer identity(Geometry geometry, int r, std::string task_name = "identity");
  // w = 0, b = value.
  static ExpressionLayer constant(Geometry geometry, int r, double value,
                                  std::string task_name = "constant");

  const std::string& task_name() const { return task_name_; }
  const Geometry& geometry() const { return geometry_; }
  int r() const { return r_; }
  double lambda_reg() const { return lambda_reg_; }
  std::size_t stride() const { return static_cast<std::size_t>(r_) * r_ + 1; }
  std::span<const double> coefficients() const { return coefficients_; }

  std::span<const double> weights(int channel, PixelCoord p) const {
    return std::span<const double>(coefficients_).subspan(offset(channel, p), stride() - 1);
  }
  double bias(int channel, PixelCoord p) const {
    return coefficients_[offset(channel, p) + stride() - 1];
  }
  PixelSolution solution(int channel, PixelCoord p) const;

  friend bool operator==(const ExpressionLayer&, const ExpressionLayer&) = default;

 private:
  std::size_t offset(int channel, PixelCoord p) const {
    return ((static_cast<std::size_t>(channel) * geometry_.height + p.row) * geometry_.width +
            p.col) *
           stride();
  }

  std::string task_name_;
  Geometry geometry_;
  int r_ = 1;
  double lambda_reg_ = 1.0;
  std::vector<double> coefficients_;
};

struct TrainOptions {
  unsigned threads = 1;
  // Called after each (channel, row) finishes with (rows done, rows total).
  // Calls are serialized but may arrive from worker threads.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Solves every (channel, pixel) system of `ds` with solve_pixel. Output is
/// independent of the thread count. Solver failures are rethrown as Error
/// naming the channel and pixel.
ExpressionLayer train_expression_layer(const PairedDataset& ds, const RidgeConfig& cfg,
                                       const TrainOptions& options = {});

/// output[c][p] = clamp(w_p . patch(img, c, p) + b_p, 0, 1).
/// Throws GeometryError when the image geometry differs from the layer's.
Image apply_expression_layer(const ExpressionLayer& layer, const Image& img);

// The affine map without the final clamp.
std::vector<double> apply_expression_layer_unclamped(const ExpressionLayer& layer,
                                                     const Image& img);

}  // namespace mreg
