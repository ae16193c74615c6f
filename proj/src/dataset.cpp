#include "mreg/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "mreg/error.hpp"
#include "mreg/png_io.hpp"

namespace fs = std::filesystem;

namespace mreg {

PairedDataset::PairedDataset(std::string task_name, std::vector<ImagePair> pairs)
    : task_name_(std::move(task_name)), pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw Error("dataset '" + task_name_ + "' is empty");
  const Geometry expected = pairs_.front().input.geometry();
  for (const ImagePair& p : pairs_) {
    for (const Image* img : {&p.input, &p.target}) {
      if (img->geometry() != expected)
        throw GeometryError("dimension mismatch: pair '" + p.name + "' has " +
                            img->geometry().to_string() + ", expected " + expected.to_string());
    }
  }
}

std::vector<fs::path> list_png_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

std::vector<ManifestEntry> read_dataset_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse manifest " + path.string() + ": " + e.what());
  }
  if (!doc.is_array()) throw IoError("manifest " + path.string() + " must be a JSON list");
  std::vector<ManifestEntry> entries;
  for (const nlohmann::json& item : doc) {
    if (!item.is_object() || !item.contains("input") || !item.contains("target") ||
        !item["input"].is_string() || !item["target"].is_string())
      throw IoError("manifest " + path.string() +
                    ": every entry needs string fields 'input' and 'target'");
    entries.push_back({item["input"].get<std::string>(), item["target"].get<std::string>()});
  }
  return entries;
}

namespace {

Image load_checked(const fs::path& file, const Image* reference, const fs::path& reference_file) {
  Image img = read_png(file);
  if (reference != nullptr && img.geometry() != reference->geometry())
    throw GeometryError("dimension mismatch: " + file.string() + " is " +
                        img.geometry().to_string() + ", expected " +
                        reference->geometry().to_string() + " (from " +
                        reference_file.string() + ")");
  return img;
}

}  // namespace

PairedDataset load_paired_dataset(const fs::path& input_dir, const fs::path& target_dir,
                                  const std::optional<fs::path>& manifest) {
  for (const fs::path& dir : {input_dir, target_dir})
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());

  std::vector<std::pair<fs::path, fs::path>> files;
  if (manifest) {
    for (const ManifestEntry& e : read_dataset_manifest(*manifest))
      files.emplace_back(input_dir / e.input, target_dir / e.target);
    if (files.empty()) throw Error("manifest " + manifest->string() + " lists no pairs");
  } else {
    const std::vector<fs::path> inputs = list_png_files(input_dir);
    const std::vector<fs::path> targets = list_png_files(target_dir);
    if (inputs.size() != targets.size()) {
      const bool more_inputs = inputs.size() > targets.size();
      const fs::path& extra =
          more_inputs ? inputs[targets.size()] : targets[inputs.size()];
      throw Error("pair count mismatch: " + input_dir.string() + " has " +
                  std::to_string(inputs.size()) + " images, " + target_dir.string() + " has " +
                  std::to_string(targets.size()) + " (first unpaired file: " + extra.string() +
                  ")");
    }
    if (inputs.empty()) throw Error("no PNG images in " + input_dir.string());
    for (std::size_t i = 0; i < inputs.size(); ++i) files.emplace_back(inputs[i], targets[i]);
  }

  std::vector<ImagePair> pairs;
  pairs.reserve(files.size());
  const Image* reference = nullptr;
  for (const auto& [input_file, target_file] : files) {
    Image input = load_checked(input_file, reference, files.front().first);
    Image target = load_checked(target_file, reference ? reference : &input, files.front().first);
    pairs.push_back({input_file.stem().string(), std::move(input), std::move(target)});
    reference = &pairs.front().input;
  }

  std::string task = input_dir.filename().string() + "->" + target_dir.filename().string();
  return PairedDataset(std::move(task), std::move(pairs));
}

std::pair<PairedDataset, PairedDataset> split_dataset(const PairedDataset& ds,
                                                      double holdout_fraction) {
  const std::size_t n = ds.size();
  if (n < 2) throw Error("cannot split a dataset with fewer than 2 pairs");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw Error("holdout fraction must lie in (0,1)");
  auto held = static_cast<std::size_t>(std::llround(static_cast<double>(n) * holdout_fraction));
  held = std::clamp<std::size_t>(held, 1, n - 1);
  std::vector<ImagePair> train(ds.pairs().begin(), ds.pairs().end() - static_cast<long>(held));
  std::vector<ImagePair> test(ds.pairs().end() - static_cast<long>(held), ds.pairs().end());
  return {PairedDataset(ds.task_name(), std::move(train)),
          PairedDataset(ds.task_name(), std::move(test))};
}

}  // namespace mreg
