#include "mreg/intermediates.hpp"

#include <cstdio>
#include <fstream>

#include "mreg/error.hpp"
#include "mreg/png_io.hpp"

namespace fs = std::filesystem;

namespace mreg {

nlohmann::json IntermediateManifest::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const IntermediateTriplet& t : triplets)
    list.push_back({{"input", t.input}, {"intermediate", t.intermediate}, {"target", t.target}});
  return {{"task", task}, {"r", r}, {"lambda_reg", lambda_reg}, {"triplets", list}};
}

IntermediateManifest IntermediateManifest::from_json(const nlohmann::json& doc) {
  IntermediateManifest m;
  try {
    m.task = doc.at("task").get<std::string>();
    m.r = doc.at("r").get<int>();
    m.lambda_reg = doc.at("lambda_reg").get<double>();
    for (const nlohmann::json& t : doc.at("triplets"))
      m.triplets.push_back({t.at("input").get<std::string>(),
                            t.at("intermediate").get<std::string>(),
                            t.at("target").get<std::string>()});
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed intermediate manifest: ") + e.what());
  }
  return m;
}

IntermediateManifest export_intermediates(const ExpressionLayer& layer, const PairedDataset& ds,
                                          const fs::path& out_dir) {
  if (ds.geometry() != layer.geometry())
    throw GeometryError("geometry mismatch: dataset is " + ds.geometry().to_string() +
                        ", layer expects " + layer.geometry().to_string());
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  IntermediateManifest manifest{layer.task_name(), layer.r(), layer.lambda_reg(), {}};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const ImagePair& pair = ds[i];
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%04zu_", i);
    const std::string stem = prefix + pair.name;
    IntermediateTriplet t{stem + "_input.png", stem + "_intermediate.png", stem + "_target.png"};
    write_png(pair.input, out_dir / t.input);
    write_png(apply_expression_layer(layer, pair.input), out_dir / t.intermediate);
    write_png(pair.target, out_dir / t.target);
    manifest.triplets.push_back(std::move(t));
  }

  const fs::path manifest_path = out_dir / kIntermediateManifestName;
  std::ofstream out(manifest_path);
  if (!out) throw IoError("cannot write " + manifest_path.string());
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw IoError("short write to " + manifest_path.string());
  return manifest;
}

}  // namespace mreg
