#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mreg {

struct Geometry {
  int height = 0;
  int width = 0;
  int channels = 0;

  std::size_t plane_size() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  std::size_t size() const { return plane_size() * static_cast<std::size_t>(channels); }
  bool contains(int row, int col) const {
    return row >= 0 && row < height && col >= 0 && col < width;
  }
  std::string to_string() const;  // "HxWxC"

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

struct PixelCoord {
  int row = 0;
  int col = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Immutable H x W x C image with intensities in [0, 1].
///
/// Storage is channel-planar and row-major within a plane:
/// index = (channel * height + row) * width + col.
class Image {
 public:
  Image() = default;

  /// Throws GeometryError if the data length or channel count is wrong and
  /// Error if any intensity is outside [0, 1] or not finite.
  Image(Geometry geometry, std::vector<double> data);

  static Image filled(Geometry geometry, double value);

  /// Builds an image from fn(channel, row, col).
  template <class Fn>
  static Image generate(Geometry geometry, Fn&& fn) {
    std::vector<double> data(geometry.size());
    std::size_t i = 0;
    for (int c = 0; c < geometry.channels; ++c)
      for (int y = 0; y < geometry.height; ++y)
        for (int x = 0; x < geometry.width; ++x) data[i++] = fn(c, y, x);
    return Image(geometry, std::move(data));
  }

  const Geometry& geometry() const { return geometry_; }
  int height() const { return geometry_.height; }
  int width() const { return geometry_.width; }
  int channels() const { return geometry_.channels; }
  bool empty() const { return data_.empty(); }

  double at(int channel, int row, int col) const {
    return data_[(static_cast<std::size_t>(channel) * geometry_.height + row) * geometry_.width + col];
  }

  // Replicate (clamp-to-edge) boundary policy.
  double at_clamped(int channel, int row, int col) const;

  std::span<const double> data() const { return data_; }
  std::span<const double> plane(int channel) const;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  Geometry geometry_;
  std::vector<double> data_;
};

struct PatchVector {
  std::vector<double> values;  // r*r intensities, row-major
  PixelCoord center;
};

/// The r x r window of `channel` centred at `center`, flattened row-major.
/// Coordinates outside the image are clamped to the nearest edge pixel.
/// Throws Error for even or non-positive r, GeometryError for a centre
/// outside the image or an invalid channel.
PatchVector extract_receptive_field(const Image& img, int channel, PixelCoord center, int r);

// Unchecked fill of a preallocated r*r buffer; callers validate arguments.
void gather_receptive_field(const Image& img, int channel, PixelCoord center, int r,
                            std::span<double> out);

void check_receptive_field_size(int r);

}  // namespace mreg
