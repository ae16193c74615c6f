#include "mreg/expression_layer.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "mreg/error.hpp"
#include "mreg/parallel.hpp"

namespace mreg {

ExpressionLayer::ExpressionLayer(std::string task_name, Geometry geometry, int r,
                                 double lambda_reg, std::vector<double> coefficients)
    : task_name_(std::move(task_name)),
      geometry_(geometry),
      r_(r),
      lambda_reg_(lambda_reg),
      coefficients_(std::move(coefficients)) {
  check_receptive_field_size(r_);
  if (geometry_.height <= 0 || geometry_.width <= 0 ||
      (geometry_.channels != 1 && geometry_.channels != 3))
    throw GeometryError("invalid layer geometry " + geometry_.to_string());
  if (coefficients_.size() != geometry_.size() * stride())
    throw GeometryError("layer has " + std::to_string(coefficients_.size()) +
                        " coefficients, expected " + std::to_string(geometry_.size() * stride()) +
                        " for " + geometry_.to_string() + " with r=" + std::to_string(r_));
  if (!std::all_of(coefficients_.begin(), coefficients_.end(),
                   [](double v) { return std::isfinite(v); }))
    throw Error("layer coefficients must be finite");
}

ExpressionLayer ExpressionLayer::identity(Geometry geometry, int r, std::string task_name) {
  check_receptive_field_size(r);
  const std::size_t stride = static_cast<std::size_t>(r) * r + 1;
  std::vector<double> coefficients(geometry.size() * stride, 0.0);
  const std::size_t centre = static_cast<std::size_t>(r) * r / 2;
  for (std::size_t p = 0; p < geometry.size(); ++p) coefficients[p * stride + centre] = 1.0;
  return ExpressionLayer(std::move(task_name), geometry, r, 1.0, std::move(coefficients));
}

ExpressionLayer ExpressionLayer::constant(Geometry geometry, int r, double value,
                                          std::string task_name) {
  check_receptive_field_size(r);
  const std::size_t stride = static_cast<std::size_t>(r) * r + 1;
  std::vector<double> coefficients(geometry.size() * stride, 0.0);
  for (std::size_t p = 0; p < geometry.size(); ++p) coefficients[p * stride + stride - 1] = value;
  return ExpressionLayer(std::move(task_name), geometry, r, 1.0, std::move(coefficients));
}

PixelSolution ExpressionLayer::solution(int channel, PixelCoord p) const {
  const std::span<const double> w = weights(channel, p);
  PixelSolution sol{Eigen::VectorXd(static_cast<Eigen::Index>(w.size())), bias(channel, p)};
  for (std::size_t i = 0; i < w.size(); ++i) sol.weights(static_cast<Eigen::Index>(i)) = w[i];
  return sol;
}

ExpressionLayer train_expression_layer(const PairedDataset& ds, const RidgeConfig& cfg,
                                       const TrainOptions& options) {
  cfg.validate();
  const Geometry g = ds.geometry();
  const std::size_t stride = static_cast<std::size_t>(cfg.r) * cfg.r + 1;
  std::vector<double> coefficients(g.size() * stride);

  const std::size_t rows_total = static_cast<std::size_t>(g.channels) * g.height;
  std::size_t rows_done = 0;
  std::mutex progress_mutex;

  parallel_for(rows_total, options.threads, [&](std::size_t job) {
    const int channel = static_cast<int>(job / g.height);
    const int row = static_cast<int>(job % g.height);
    for (int col = 0; col < g.width; ++col) {
      const PixelCoord p{row, col};
      PixelSolution sol;
      try {
        sol = solve_pixel(build_pixel_system(ds, channel, p, cfg.r), cfg.lambda_reg, cfg.variant);
      } catch (const Error& e) {
        throw Error("solve failed at channel " + std::to_string(channel) + " pixel (" +
                    std::to_string(row) + "," + std::to_string(col) + "): " + e.what());
      }
      const std::size_t base =
          ((static_cast<std::size_t>(channel) * g.height + row) * g.width + col) * stride;
      for (std::size_t i = 0; i + 1 < stride; ++i)
        coefficients[base + i] = sol.weights(static_cast<Eigen::Index>(i));
      coefficients[base + stride - 1] = sol.bias;
    }
    if (options.progress) {
      std::lock_guard<std::mutex> lock(progress_mutex);
      options.progress(++rows_done, rows_total);
    }
  });

  return ExpressionLayer(ds.task_name(), g, cfg.r, cfg.lambda_reg, std::move(coefficients));
}

std::vector<double> apply_expression_layer_unclamped(const ExpressionLayer& layer,
                                                     const Image& img) {
  if (img.geometry() != layer.geometry())
    throw GeometryError("geometry mismatch: image is " + img.geometry().to_string() +
                        ", layer expects " + layer.geometry().to_string());
  const Geometry& g = layer.geometry();
  const int r = layer.r();
  std::vector<double> out(g.size());
  std::vector<double> patch(static_cast<std::size_t>(r) * r);
  std::size_t i = 0;
  for (int c = 0; c < g.channels; ++c)
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x) {
        const PixelCoord p{y, x};
        gather_receptive_field(img, c, p, r, patch);
        const std::span<const double> w = layer.weights(c, p);
        double v = layer.bias(c, p);
        for (std::size_t j = 0; j < patch.size(); ++j) v += w[j] * patch[j];
        out[i++] = v;
      }
  return out;
}

Image apply_expression_layer(const ExpressionLayer& layer, const Image& img) {
  std::vector<double> out = apply_expression_layer_unclamped(layer, img);
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return Image(layer.geometry(), std::move(out));
}

}  // namespace mreg
