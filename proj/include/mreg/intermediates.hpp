#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mreg/dataset.hpp"
#include "mreg/expression_layer.hpp"

namespace mreg {

struct IntermediateTriplet {
  std::string input;         // paths relative to the export directory
  std::string intermediate;
  std::string target;
};

// Interchange contract for the refinement trainer; written as manifest.json:
// {"task", "r", "lambda_reg", "triplets": [{"input", "intermediate", "target"}]}
struct IntermediateManifest {
  std::string task;
  int r = 0;
  double lambda_reg = 0.0;
  std::vector<IntermediateTriplet> triplets;

  nlohmann::json to_json() const;
  static IntermediateManifest from_json(const nlohmann::json& doc);
};

inline constexpr const char* kIntermediateManifestName = "manifest.json";

/// Applies `layer` to every input and writes <index>_<name>_{input,
/// intermediate,target}.png plus manifest.json into out_dir (created if
/// missing). Output bytes depend only on the layer and dataset.
IntermediateManifest export_intermediates(const ExpressionLayer& layer, const PairedDataset& ds,
                                          const std::filesystem::path& out_dir);

}  // namespace mreg
