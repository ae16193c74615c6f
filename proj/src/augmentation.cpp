#include "mreg/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "mreg/error.hpp"

namespace mreg {

void AugmentSpec::validate() const {
  if (copies_per_pair < 0) throw Error("copies per pair must be >= 0");
  if (!(hue_range_deg >= 0.0 && hue_range_deg <= 180.0))
    throw Error("hue range must lie in [0, 180] degrees");
  if (!(saturation_range >= 0.0 && saturation_range < 1.0))
    throw Error("saturation range must lie in [0, 1) so scales stay positive");
  if (!(value_range >= 0.0 && value_range < 1.0))
    throw Error("value range must lie in [0, 1) so scales stay positive");
}

Hsv rgb_to_hsv(double r, double g, double b) {
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double chroma = max - min;
  Hsv out{0.0, max > 0.0 ? chroma / max : 0.0, max};
  if (chroma > 0.0) {
    double h;
    if (max == r)
      h = std::fmod((g - b) / chroma, 6.0);
    else if (max == g)
      h = (b - r) / chroma + 2.0;
    else
      h = (r - g) / chroma + 4.0;
    h *= 60.0;
    if (h < 0.0) h += 360.0;
    out.h = h;
  }
  return out;
}

void hsv_to_rgb(const Hsv& hsv, double& r, double& g, double& b) {
  const double chroma = hsv.v * hsv.s;
  const double hp = hsv.h / 60.0;
  const double x = chroma * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r1 = 0, g1 = 0, b1 = 0;
  switch (static_cast<int>(hp) % 6) {
    case 0: r1 = chroma; g1 = x; break;
    case 1: r1 = x; g1 = chroma; break;
    case 2: g1 = chroma; b1 = x; break;
    case 3: g1 = x; b1 = chroma; break;
    case 4: r1 = x; b1 = chroma; break;
    default: r1 = chroma; b1 = x; break;
  }
  const double m = hsv.v - chroma;
  r = r1 + m;
  g = g1 + m;
  b = b1 + m;
}

namespace {

double uniform_symmetric(std::mt19937_64& rng) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  return 2.0 * u - 1.0;
}

}  // namespace

ColorTransform sample_color_transform(const AugmentSpec& spec, std::size_t pair_index,
                                      std::size_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(pair_index),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(pair_index) >> 32),
                    static_cast<std::uint32_t>(k)};
  std::mt19937_64 rng(seq);
  ColorTransform t;
  t.hue_shift_deg = spec.hue_range_deg * uniform_symmetric(rng);
  t.saturation_scale = 1.0 + spec.saturation_range * uniform_symmetric(rng);
  t.value_scale = 1.0 + spec.value_range * uniform_symmetric(rng);
  return t;
}

Image apply_color_transform(const Image& img, const ColorTransform& transform) {
  if (img.channels() != 3)
    throw Error("colour augmentation needs 3-channel images, got " + img.geometry().to_string());
  if (transform.is_identity()) return img;

  const std::size_t plane = img.geometry().plane_size();
  const std::span<const double> src = img.data();
  std::vector<double> out(src.size());
  for (std::size_t i = 0; i < plane; ++i) {
    Hsv hsv = rgb_to_hsv(src[i], src[plane + i], src[2 * plane + i]);
    hsv.h = std::fmod(hsv.h + transform.hue_shift_deg, 360.0);
    if (hsv.h < 0.0) hsv.h += 360.0;
    hsv.s = std::clamp(hsv.s * transform.saturation_scale, 0.0, 1.0);
    hsv.v = std::clamp(hsv.v * transform.value_scale, 0.0, 1.0);
    double r, g, b;
    hsv_to_rgb(hsv, r, g, b);
    out[i] = std::clamp(r, 0.0, 1.0);
    out[plane + i] = std::clamp(g, 0.0, 1.0);
    out[2 * plane + i] = std::clamp(b, 0.0, 1.0);
  }
  return Image(img.geometry(), std::move(out));
}

std::pair<Image, Image> augment_pair(const Image& input, const Image& target,
                                     const AugmentSpec& spec, std::size_t pair_index,
                                     std::size_t k) {
  spec.validate();
  if (input.channels() != 3 || target.channels() != 3)
    throw Error("colour augmentation needs 3-channel images");
  if (input.geometry() != target.geometry())
    throw GeometryError("augment_pair: input is " + input.geometry().to_string() +
                        ", target is " + target.geometry().to_string());
  const ColorTransform t = sample_color_transform(spec, pair_index, k);
  return {apply_color_transform(input, t), apply_color_transform(target, t)};
}

PairedDataset augment_dataset(const PairedDataset& ds, const AugmentSpec& spec) {
  spec.validate();
  if (ds.geometry().channels != 3)
    throw Error("colour augmentation needs a 3-channel dataset, got " +
                ds.geometry().to_string());
  std::vector<ImagePair> pairs;
  pairs.reserve(ds.size() * static_cast<std::size_t>(1 + spec.copies_per_pair));
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const ImagePair& original = ds[i];
    pairs.push_back(original);
    for (int k = 1; k <= spec.copies_per_pair; ++k) {
      auto [input, target] =
          augment_pair(original.input, original.target, spec, i, static_cast<std::size_t>(k));
      pairs.push_back({original.name + "_aug" + std::to_string(k), std::move(input),
                       std::move(target)});
    }
  }
  return PairedDataset(ds.task_name(), std::move(pairs));
}

}  // namespace mreg
