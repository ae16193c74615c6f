#pragma once

#include <cstdint>

#include "mreg/dataset.hpp"
#include "mreg/image.hpp"

namespace mreg {

// Desk-scale paired task: smooth random "faces" whose targets carry a fixed
// brightened arc (a smile) near the bottom of the frame plus Gaussian noise.
struct SmileTaskSpec {
  int pairs = 60;
  int size = 16;
  int channels = 1;
  double smile_amplitude = 0.35;
  double noise_sigma = 0.02;
  std::uint64_t seed = 7;
};

// The additive smile pattern, values in [0, smile_amplitude].
Image smile_pattern(const SmileTaskSpec& spec);

PairedDataset make_smile_dataset(const SmileTaskSpec& spec);

// Random inputs paired with themselves (target = input).
PairedDataset make_identity_dataset(int pairs, Geometry geometry, std::uint64_t seed);

}  // namespace mreg
