#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mreg/expression_layer.hpp"

namespace mreg {

// Layer file, all integers and floats little-endian:
//
//   "MREG"                     4 bytes magic
//   version                    u16 (kLayerFormatVersion)
//   task name                  u32 byte length + UTF-8 bytes
//   height, width, channels    u32 each
//   r                          u16
//   lambda_reg                 f64
//   coefficients               channels*height*width*(r*r+1) f64,
//                              [channel][row][col], bias last per pixel
//   crc32                      u32 over every preceding byte
inline constexpr std::uint16_t kLayerFormatVersion = 1;

std::vector<std::uint8_t> serialize_layer(const ExpressionLayer& layer);

// Throws LayerFormatError: "not a layer file", "unsupported layer format
// version", "truncated layer file", "trailing bytes", "checksum mismatch".
ExpressionLayer deserialize_layer(std::span<const std::uint8_t> bytes);

void save_layer(const ExpressionLayer& layer, const std::filesystem::path& path);
ExpressionLayer load_layer(const std::filesystem::path& path);

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace mreg
