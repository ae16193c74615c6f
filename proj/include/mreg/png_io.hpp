#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mreg/image.hpp"

namespace mreg {

// 8-bit grayscale or RGB PNG. Palette and low-bit-depth grayscale files are
// expanded, 16-bit files are reduced to 8 bits, files with alpha are rejected.
Image read_png(const std::filesystem::path& path);

// Intensities are quantized with round(v * 255). Encoding is deterministic:
// no timestamps or text chunks, fixed compression settings.
std::vector<std::uint8_t> encode_png(const Image& img);
void write_png(const Image& img, const std::filesystem::path& path);

std::uint8_t quantize_intensity(double v);

}  // namespace mreg
