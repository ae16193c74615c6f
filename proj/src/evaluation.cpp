#include "mreg/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "mreg/error.hpp"
#include "mreg/layer_io.hpp"

namespace mreg {

PixelMetrics pixel_metrics(const Image& a, const Image& b) {
  if (a.geometry() != b.geometry())
    throw GeometryError("geometry mismatch: " + a.geometry().to_string() + " vs " +
                        b.geometry().to_string());
  const std::span<const double> x = a.data();
  const std::span<const double> y = b.data();
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
  }
  const auto n = static_cast<double>(x.size());
  PixelMetrics m{abs_sum / n, sq_sum / n, 0.0};
  m.psnr_db = m.mse == 0.0 ? std::numeric_limits<double>::infinity()
                           : 10.0 * std::log10(1.0 / m.mse);
  return m;
}

void EvalReport::finalize() {
  mean = {};
  if (records.empty()) return;
  for (const EvalRecord& r : records) {
    mean.mae += r.metrics.mae;
    mean.mse += r.metrics.mse;
    mean.psnr_db += r.metrics.psnr_db;
  }
  const auto n = static_cast<double>(records.size());
  mean.mae /= n;
  mean.mse /= n;
  mean.psnr_db /= n;
}

namespace {

nlohmann::json psnr_json(double psnr) {
  if (std::isinf(psnr)) return "inf";
  return psnr;
}

nlohmann::json metrics_json(const PixelMetrics& m) {
  return {{"mae", m.mae}, {"mse", m.mse}, {"psnr_db", psnr_json(m.psnr_db)}};
}

}  // namespace

nlohmann::json EvalReport::to_json() const {
  nlohmann::json images = nlohmann::json::array();
  for (const EvalRecord& r : records) {
    nlohmann::json item = metrics_json(r.metrics);
    item["name"] = r.name;
    images.push_back(std::move(item));
  }
  return {{"task", task},
          {"model_hash", model_hash},
          {"count", records.size()},
          {"images", images},
          {"mean", metrics_json(mean)},
          {"ecs", nullptr},
          {"fss", nullptr},
          {"rs", nullptr},
          {"fid", nullptr}};
}

std::string layer_hash(const ExpressionLayer& layer) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "crc32:%08x", crc32_of(serialize_layer(layer)));
  return buf;
}

EvalReport evaluate_layer(const ExpressionLayer& layer, const PairedDataset& ds) {
  if (ds.geometry() != layer.geometry())
    throw GeometryError("geometry mismatch: dataset is " + ds.geometry().to_string() +
                        ", layer expects " + layer.geometry().to_string());
  EvalReport report{ds.task_name(), layer_hash(layer), {}, {}};
  for (const ImagePair& pair : ds.pairs())
    report.records.push_back(
        {pair.name, pixel_metrics(apply_expression_layer(layer, pair.input), pair.target)});
  report.finalize();
  return report;
}

EvalReport evaluate_identity_baseline(const PairedDataset& ds) {
  EvalReport report{ds.task_name(), "", {}, {}};
  for (const ImagePair& pair : ds.pairs())
    report.records.push_back({pair.name, pixel_metrics(pair.input, pair.target)});
  report.finalize();
  return report;
}

}  // namespace mreg
