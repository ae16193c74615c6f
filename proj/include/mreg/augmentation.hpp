#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "mreg/dataset.hpp"
#include "mreg/image.hpp"

namespace mreg {

// Colour jitter ranges are symmetric: hue shift in [-hue_range_deg,
// +hue_range_deg], saturation and value scales in [1 - range, 1 + range].
struct AugmentSpec {
  int copies_per_pair = 10;
  std::uint64_t seed = 42;
  double hue_range_deg = 25.0;
  double saturation_range = 0.3;
  double value_range = 0.15;

  void validate() const;
};

struct ColorTransform {
  double hue_shift_deg = 0.0;
  double saturation_scale = 1.0;
  double value_scale = 1.0;

  bool is_identity() const {
    return hue_shift_deg == 0.0 && saturation_scale == 1.0 && value_scale == 1.0;
  }
  ColorTransform inverse() const {
    return {-hue_shift_deg, 1.0 / saturation_scale, 1.0 / value_scale};
  }
};

struct Hsv {
  double h = 0.0;  // degrees in [0, 360)
  double s = 0.0;
  double v = 0.0;
};

Hsv rgb_to_hsv(double r, double g, double b);
void hsv_to_rgb(const Hsv& hsv, double& r, double& g, double& b);

// Deterministic in (spec.seed, pair_index, k); the stream is the standard
// mt19937_64 sequence, so draws are identical across platforms.
ColorTransform sample_color_transform(const AugmentSpec& spec, std::size_t pair_index,
                                      std::size_t k);

// Hue shift and saturation/value scaling in HSV space, clamped to [0,1].
// Throws Error for non-RGB images.
Image apply_color_transform(const Image& img, const ColorTransform& transform);

/// Applies one sampled transform to both images of a pair.
std::pair<Image, Image> augment_pair(const Image& input, const Image& target,
                                     const AugmentSpec& spec, std::size_t pair_index,
                                     std::size_t k);

/// Each original pair followed by its copies (k = 1..copies_per_pair, named
/// "<name>_aug<k>"); N_out = N * (1 + copies_per_pair).
PairedDataset augment_dataset(const PairedDataset& ds, const AugmentSpec& spec);

}  // namespace mreg
