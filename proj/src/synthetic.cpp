#include "mreg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace mreg {
namespace {

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double between(double lo, double hi) { return lo + (hi - lo) * (*this)(); }
  // Box-Muller; avoids std::normal_distribution so streams match everywhere.
  double normal() {
    const double u1 = 1.0 - (*this)();
    const double u2 = (*this)();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 rng_;
};

// Base level, a linear gradient and two Gaussian blobs, kept inside
// [0.05, 0.55] so brightened targets rarely clip.
Image random_face(Geometry g, Uniform& u) {
  std::vector<double> data(g.size());
  for (int c = 0; c < g.channels; ++c) {
    const double base = u.between(0.15, 0.35);
    const double gy = u.between(-0.08, 0.08);
    const double gx = u.between(-0.08, 0.08);
    struct Blob { double y, x, radius, height; };
    const Blob blobs[2] = {
        {u.between(0, g.height), u.between(0, g.width), u.between(1.5, 4.0), u.between(-0.1, 0.15)},
        {u.between(0, g.height), u.between(0, g.width), u.between(1.5, 4.0), u.between(-0.1, 0.15)}};
    for (int y = 0; y < g.height; ++y)
      for (int x = 0; x < g.width; ++x) {
        double v = base + gy * (y / double(g.height) - 0.5) + gx * (x / double(g.width) - 0.5);
        for (const Blob& b : blobs) {
          const double d2 = (y - b.y) * (y - b.y) + (x - b.x) * (x - b.x);
          v += b.height * std::exp(-d2 / (2.0 * b.radius * b.radius));
        }
        data[(static_cast<std::size_t>(c) * g.height + y) * g.width + x] = std::clamp(v, 0.05, 0.55);
      }
  }
  return Image(g, std::move(data));
}

}  // namespace

Image smile_pattern(const SmileTaskSpec& spec) {
  const Geometry g{spec.size, spec.size, spec.channels};
  const double cy = 0.35 * spec.size;
  const double cx = 0.5 * (spec.size - 1);
  const double radius = 0.38 * spec.size;
  const double thickness = 0.09 * spec.size;
  return Image::generate(g, [&](int, int y, int x) {
    const double dy = y - cy;
    const double dx = x - cx;
    if (dy <= 0.0) return 0.0;  // lower arc only
    const double off = std::hypot(dy, dx) - radius;
    return spec.smile_amplitude * std::exp(-off * off / (2.0 * thickness * thickness));
  });
}

PairedDataset make_smile_dataset(const SmileTaskSpec& spec) {
  const Geometry g{spec.size, spec.size, spec.channels};
  const Image pattern = smile_pattern(spec);
  Uniform u(spec.seed);
  std::vector<ImagePair> pairs;
  for (int i = 0; i < spec.pairs; ++i) {
    Image input = random_face(g, u);
    std::vector<double> target(g.size());
    for (std::size_t j = 0; j < target.size(); ++j)
      target[j] = std::clamp(input.data()[j] + pattern.data()[j] + spec.noise_sigma * u.normal(),
                             0.0, 1.0);
    pairs.push_back({"face" + std::to_string(1000 + i).substr(1), std::move(input),
                     Image(g, std::move(target))});
  }
  return PairedDataset("neutral->smile", std::move(pairs));
}

PairedDataset make_identity_dataset(int pairs, Geometry geometry, std::uint64_t seed) {
  Uniform u(seed);
  std::vector<ImagePair> out;
  for (int i = 0; i < pairs; ++i) {
    Image img = random_face(geometry, u);
    out.push_back({"img" + std::to_string(1000 + i).substr(1), img, img});
  }
  return PairedDataset("identity", std::move(out));
}

}  // namespace mreg
