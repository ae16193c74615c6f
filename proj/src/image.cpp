#include "mreg/image.hpp"

#include <algorithm>
#include <cmath>

#include "mreg/error.hpp"

namespace mreg {

std::string Geometry::to_string() const {
  return std::to_string(height) + "x" + std::to_string(width) + "x" + std::to_string(channels);
}

Image::Image(Geometry geometry, std::vector<double> data)
    : geometry_(geometry), data_(std::move(data)) {
  if (geometry_.height <= 0 || geometry_.width <= 0)
    throw GeometryError("image dimensions must be positive, got " + geometry_.to_string());
  if (geometry_.channels != 1 && geometry_.channels != 3)
    throw GeometryError("image must have 1 or 3 channels, got " +
                        std::to_string(geometry_.channels));
  if (data_.size() != geometry_.size())
    throw GeometryError("image data has " + std::to_string(data_.size()) +
                        " values, expected " + std::to_string(geometry_.size()) + " for " +
                        geometry_.to_string());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double v = data_[i];
    if (!(v >= 0.0 && v <= 1.0))
      throw Error("image intensity at index " + std::to_string(i) + " is outside [0,1]: " +
                  std::to_string(v));
  }
}

Image Image::filled(Geometry geometry, double value) {
  return Image(geometry, std::vector<double>(geometry.size(), value));
}

double Image::at_clamped(int channel, int row, int col) const {
  row = std::clamp(row, 0, geometry_.height - 1);
  col = std::clamp(col, 0, geometry_.width - 1);
  return at(channel, row, col);
}

std::span<const double> Image::plane(int channel) const {
  return std::span<const double>(data_).subspan(
      static_cast<std::size_t>(channel) * geometry_.plane_size(), geometry_.plane_size());
}

void check_receptive_field_size(int r) {
  if (r < 1 || r % 2 == 0)
    throw Error("receptive field size r must be odd and >= 1, got " + std::to_string(r));
}

void gather_receptive_field(const Image& img, int channel, PixelCoord center, int r,
                            std::span<double> out) {
  const int half = r / 2;
  const int h = img.height();
  const int w = img.width();
  std::size_t i = 0;
  for (int dy = -half; dy <= half; ++dy) {
    const int y = std::clamp(center.row + dy, 0, h - 1);
    for (int dx = -half; dx <= half; ++dx) {
      const int x = std::clamp(center.col + dx, 0, w - 1);
      out[i++] = img.at(channel, y, x);
    }
  }
}

PatchVector extract_receptive_field(const Image& img, int channel, PixelCoord center, int r) {
  check_receptive_field_size(r);
  if (channel < 0 || channel >= img.channels())
    throw GeometryError("channel " + std::to_string(channel) + " out of range for " +
                        img.geometry().to_string());
  if (!img.geometry().contains(center.row, center.col))
    throw GeometryError("centre (" + std::to_string(center.row) + "," +
                        std::to_string(center.col) + ") outside image " +
                        img.geometry().to_string());
  PatchVector patch;
  patch.center = center;
  patch.values.resize(static_cast<std::size_t>(r) * r);
  gather_receptive_field(img, channel, center, r, patch.values);
  return patch;
}

}  // namespace mreg
