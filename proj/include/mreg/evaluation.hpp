#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mreg/dataset.hpp"
#include "mreg/expression_layer.hpp"
#include "mreg/image.hpp"

namespace mreg {

struct PixelMetrics {
  double mae = 0.0;
  double mse = 0.0;
  double psnr_db = 0.0;  // +inf when mse == 0
};

// Mean absolute error, mean squared error and PSNR (peak 1.0) over every
// intensity. Throws GeometryError on mismatched geometry.
PixelMetrics pixel_metrics(const Image& a, const Image& b);

struct EvalRecord {
  std::string name;
  PixelMetrics metrics;
};

struct EvalReport {
  std::string task;
  std::string model_hash;  // "crc32:xxxxxxxx" of the serialized layer, empty for baselines
  std::vector<EvalRecord> records;
  PixelMetrics mean;

  // Recomputes `mean` from `records`.
  void finalize();
  // Stable schema. PSNR of +inf is written as the string "inf". The
  // ecs/fss/rs/fid fields are reserved for external scorers and left null.
  nlohmann::json to_json() const;
};

EvalReport evaluate_layer(const ExpressionLayer& layer, const PairedDataset& ds);

// The copy-input translator: output = input.
EvalReport evaluate_identity_baseline(const PairedDataset& ds);

std::string layer_hash(const ExpressionLayer& layer);

}  // namespace mreg
