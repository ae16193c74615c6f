#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mreg/dataset.hpp"
#include "mreg/image.hpp"
#include "mreg/png_io.hpp"

namespace mreg::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    path_ = std::filesystem::temp_directory_path() /
            ("mreg_" + tag + "_" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Image random_image(std::mt19937_64& rng, Geometry g) {
  return Image::generate(g, [&](int, int, int) { return uniform01(rng); });
}

// Quantized to 8 bits so PNG round trips are exact.
inline Image random_image_8bit(std::mt19937_64& rng, Geometry g) {
  return Image::generate(g, [&](int, int, int) { return static_cast<double>(rng() % 256) / 255.0; });
}

inline PairedDataset random_dataset(std::mt19937_64& rng, int n, Geometry g,
                                    const std::string& task = "random") {
  std::vector<ImagePair> pairs;
  for (int i = 0; i < n; ++i)
    pairs.push_back({"p" + std::to_string(i), random_image(rng, g), random_image(rng, g)});
  return PairedDataset(task, std::move(pairs));
}

// Independent patch oracle: materialize the edge-replicated image with a
// border of r/2 pixels, then slice the r x r window.
inline std::vector<double> padded_slice(const Image& img, int channel, PixelCoord center, int r) {
  const int half = r / 2;
  const int h = img.height() + 2 * half;
  const int w = img.width() + 2 * half;
  std::vector<double> padded(static_cast<std::size_t>(h) * w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int sy = std::min(std::max(y - half, 0), img.height() - 1);
      const int sx = std::min(std::max(x - half, 0), img.width() - 1);
      padded[static_cast<std::size_t>(y) * w + x] = img.at(channel, sy, sx);
    }
  std::vector<double> out;
  for (int y = center.row; y < center.row + r; ++y)
    for (int x = center.col; x < center.col + r; ++x)
      out.push_back(padded[static_cast<std::size_t>(y) * w + x]);
  return out;
}

inline void write_dataset(const PairedDataset& ds, const std::filesystem::path& input_dir,
                          const std::filesystem::path& target_dir) {
  std::filesystem::create_directories(input_dir);
  std::filesystem::create_directories(target_dir);
  for (const ImagePair& p : ds.pairs()) {
    write_png(p.input, input_dir / (p.name + ".png"));
    write_png(p.target, target_dir / (p.name + ".png"));
  }
}

}  // namespace mreg::testing
