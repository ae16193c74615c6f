#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mreg/image.hpp"

namespace mreg {

struct ImagePair {
  std::string name;  // stem used for exported/augmented filenames
  Image input;
  Image target;
};

/// Aligned (input, target) pairs for one translation task. Immutable after
/// construction; every image shares one geometry and there is at least one
/// pair.
class PairedDataset {
 public:
  PairedDataset(std::string task_name, std::vector<ImagePair> pairs);

  const std::string& task_name() const { return task_name_; }
  const std::vector<ImagePair>& pairs() const { return pairs_; }
  const ImagePair& operator[](std::size_t i) const { return pairs_[i]; }
  std::size_t size() const { return pairs_.size(); }
  const Geometry& geometry() const { return pairs_.front().input.geometry(); }

 private:
  std::string task_name_;
  std::vector<ImagePair> pairs_;
};

struct ManifestEntry {
  std::string input;
  std::string target;
};

// JSON list of {"input": filename, "target": filename}; names are relative
// to the input and target directories respectively.
std::vector<ManifestEntry> read_dataset_manifest(const std::filesystem::path& path);

/// Pairs images by sorted filename, or by `manifest` when given. Intensities
/// are normalized from 8-bit to [0,1]. Errors name the offending file.
PairedDataset load_paired_dataset(const std::filesystem::path& input_dir,
                                  const std::filesystem::path& target_dir,
                                  const std::optional<std::filesystem::path>& manifest = {});

// PNG files directly inside `dir`, sorted by filename.
std::vector<std::filesystem::path> list_png_files(const std::filesystem::path& dir);

// Deterministic split: the last round(N * holdout_fraction) pairs (at least
// one, at most N-1) are held out.
std::pair<PairedDataset, PairedDataset> split_dataset(const PairedDataset& ds,
                                                      double holdout_fraction);

}  // namespace mreg
