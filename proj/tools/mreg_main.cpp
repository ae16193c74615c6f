// mreg: train, apply, evaluate and verify per-pixel ridge expression layers.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mreg/augmentation.hpp"
#include "mreg/dataset.hpp"
#include "mreg/error.hpp"
#include "mreg/evaluation.hpp"
#include "mreg/expression_layer.hpp"
#include "mreg/intermediates.hpp"
#include "mreg/layer_io.hpp"
#include "mreg/parallel.hpp"
#include "mreg/png_io.hpp"
#include "mreg/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerifyFailed = 2;

struct DatasetArgs {
  std::string input_dir;
  std::string target_dir;
  std::string manifest;

  mreg::PairedDataset load() const {
    std::optional<fs::path> m;
    if (!manifest.empty()) m = manifest;
    return mreg::load_paired_dataset(input_dir, target_dir, m);
  }
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& args) {
  cmd->add_option("--input-dir", args.input_dir, "Directory of input PNGs")->required();
  cmd->add_option("--target-dir", args.target_dir, "Directory of target PNGs")->required();
  cmd->add_option("--manifest", args.manifest,
                  "JSON list of {input, target} filenames overriding sorted-name pairing");
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct TrainArgs {
  DatasetArgs data;
  std::string out;
  std::string task;
  int r = 5;
  double lambda = 1.0;
  std::string variant = "self-consistent";
  unsigned threads = mreg::default_thread_count();
  bool quiet = false;
};

int cmd_train(const TrainArgs& a) {
  const mreg::RidgeConfig cfg{a.r, a.lambda, mreg::parse_ridge_variant(a.variant)};
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  mreg::PairedDataset ds = a.data.load();
  if (!a.task.empty()) ds = mreg::PairedDataset(a.task, ds.pairs());

  mreg::TrainOptions options;
  options.threads = a.threads;
  if (!a.quiet) {
    options.progress = [](std::size_t done, std::size_t total) {
      std::fprintf(stderr, "\rrows %zu/%zu", done, total);
      if (done == total) std::fputc('\n', stderr);
    };
  }
  const mreg::ExpressionLayer layer = mreg::train_expression_layer(ds, cfg, options);
  mreg::save_layer(layer, a.out);
  std::cout << "task " << layer.task_name() << "\n"
            << "pairs " << ds.size() << "\n"
            << "geometry " << layer.geometry().to_string() << "\n"
            << "r " << layer.r() << "\n"
            << "lambda " << layer.lambda_reg() << " (" << mreg::to_string(cfg.variant) << ")\n"
            << "wall_time_s " << seconds_since(start) << "\n"
            << "wrote " << a.out << "\n";
  return kExitOk;
}

struct ApplyArgs {
  std::string model;
  std::string input;
  std::string out;
  unsigned threads = mreg::default_thread_count();
};

int cmd_apply(const ApplyArgs& a) {
  const mreg::ExpressionLayer layer = mreg::load_layer(a.model);
  if (fs::is_directory(a.input)) {
    const std::vector<fs::path> files = mreg::list_png_files(a.input);
    if (files.empty()) throw mreg::Error("no PNG images in " + a.input);
    fs::create_directories(a.out);
    mreg::parallel_for(files.size(), a.threads, [&](std::size_t i) {
      const mreg::Image img = mreg::read_png(files[i]);
      if (img.geometry() != layer.geometry())
        throw mreg::GeometryError("geometry mismatch: " + files[i].string() + " is " +
                                  img.geometry().to_string() + ", model expects " +
                                  layer.geometry().to_string());
      mreg::write_png(mreg::apply_expression_layer(layer, img), fs::path(a.out) / files[i].filename());
    });
    std::cout << "wrote " << files.size() << " images to " << a.out << "\n";
  } else {
    const mreg::Image img = mreg::read_png(a.input);
    if (img.geometry() != layer.geometry())
      throw mreg::GeometryError("geometry mismatch: " + a.input + " is " +
                                img.geometry().to_string() + ", model expects " +
                                layer.geometry().to_string());
    mreg::write_png(mreg::apply_expression_layer(layer, img), a.out);
    std::cout << "wrote " << a.out << "\n";
  }
  return kExitOk;
}

struct EvalArgs {
  std::string model;
  DatasetArgs data;
  std::string report;
};

int cmd_eval(const EvalArgs& a) {
  const mreg::ExpressionLayer layer = mreg::load_layer(a.model);
  const mreg::PairedDataset ds = a.data.load();
  const mreg::EvalReport report = mreg::evaluate_layer(layer, ds);
  const mreg::EvalReport baseline = mreg::evaluate_identity_baseline(ds);
  nlohmann::json doc = report.to_json();
  doc["baseline_mean"] = baseline.to_json()["mean"];
  if (a.report.empty()) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(a.report);
    if (!out) throw mreg::IoError("cannot write " + a.report);
    out << doc.dump(2) << "\n";
    std::cout << "images " << report.records.size() << "\n"
              << "mean_mae " << report.mean.mae << " (identity baseline " << baseline.mean.mae
              << ")\n"
              << "mean_mse " << report.mean.mse << "\n"
              << "wrote " << a.report << "\n";
  }
  return kExitOk;
}

struct AugmentArgs {
  DatasetArgs data;
  std::string out_dir;
  mreg::AugmentSpec spec;
};

int cmd_augment(const AugmentArgs& a) {
  a.spec.validate();
  const mreg::PairedDataset ds = a.data.load();
  const mreg::PairedDataset augmented = mreg::augment_dataset(ds, a.spec);
  const fs::path input_out = fs::path(a.out_dir) / fs::path(a.data.input_dir).filename();
  const fs::path target_out = fs::path(a.out_dir) / fs::path(a.data.target_dir).filename();
  fs::create_directories(input_out);
  fs::create_directories(target_out);
  for (const mreg::ImagePair& pair : augmented.pairs()) {
    mreg::write_png(pair.input, input_out / (pair.name + ".png"));
    mreg::write_png(pair.target, target_out / (pair.name + ".png"));
  }
  std::cout << "pairs_in " << ds.size() << "\n"
            << "pairs_out " << augmented.size() << "\n"
            << "wrote " << input_out.string() << " and " << target_out.string() << "\n";
  return kExitOk;
}

struct ExportArgs {
  std::string model;
  DatasetArgs data;
  std::string out_dir;
};

int cmd_export(const ExportArgs& a) {
  const mreg::ExpressionLayer layer = mreg::load_layer(a.model);
  const mreg::PairedDataset ds = a.data.load();
  const mreg::IntermediateManifest m = mreg::export_intermediates(layer, ds, a.out_dir);
  std::cout << "triplets " << m.triplets.size() << "\n"
            << "wrote " << (fs::path(a.out_dir) / mreg::kIntermediateManifestName).string()
            << "\n";
  return kExitOk;
}

int cmd_verify(const mreg::VerifyOptions& options) {
  const mreg::VerifyReport report = mreg::run_verification(options);
  for (const mreg::PropertyResult& p : report.properties) {
    std::printf("%-18s %s  checked=%d worst=%.3g tol=%.0e%s%s\n", p.name.c_str(),
                p.passed ? "PASS" : "FAIL", p.checked, p.worst, p.tolerance,
                p.detail.empty() ? "" : "  ", p.detail.c_str());
  }
  std::printf("seed %llu, %.2f s\n", static_cast<unsigned long long>(options.seed), report.seconds);
  if (!report.all_passed()) {
    std::string names;
    for (const std::string& n : report.failed()) names += (names.empty() ? "" : ", ") + n;
    std::fprintf(stderr, "verification failed: %s\n", names.c_str());
    return kExitVerifyFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-pixel ridge-regression expression layers: train, apply, evaluate, verify"};
  app.require_subcommand(1);

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train an expression layer from paired images");
  add_dataset_options(train_cmd, train.data);
  train_cmd->add_option("--out", train.out, "Output layer file")->required();
  train_cmd->add_option("--task", train.task, "Task name stored in the layer (default: <input>-><target>)");
  train_cmd->add_option("--r", train.r, "Receptive field size (odd)")->capture_default_str();
  train_cmd->add_option("--lambda", train.lambda, "Ridge regularization strength (> 0)")
      ->capture_default_str();
  train_cmd->add_option("--variant", train.variant,
                        "Normal-equation diagonal: self-consistent (lambda/2) or printed (lambda)")
      ->check(CLI::IsMember({"self-consistent", "printed"}))
      ->capture_default_str();
  train_cmd->add_option("--threads", train.threads, "Worker threads")
      ->envname("MREG_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  train_cmd->add_flag("--quiet", train.quiet, "Suppress per-row progress");

  ApplyArgs apply;
  CLI::App* apply_cmd = app.add_subcommand("apply", "Apply a layer to an image or a directory of images");
  apply_cmd->add_option("--model", apply.model, "Layer file")->required();
  apply_cmd->add_option("--input", apply.input, "Input PNG or directory")->required();
  apply_cmd->add_option("--out", apply.out, "Output PNG or directory")->required();
  apply_cmd->add_option("--threads", apply.threads, "Worker threads")
      ->envname("MREG_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Pixel metrics of a layer on held-out pairs");
  eval_cmd->add_option("--model", eval.model, "Layer file")->required();
  add_dataset_options(eval_cmd, eval.data);
  eval_cmd->add_option("--report", eval.report, "Write the JSON report here instead of stdout");

  AugmentArgs augment;
  CLI::App* augment_cmd = app.add_subcommand("augment", "Write colour-jittered copies of a paired dataset");
  add_dataset_options(augment_cmd, augment.data);
  augment_cmd->add_option("--out-dir", augment.out_dir, "Output root")->required();
  augment_cmd->add_option("--copies", augment.spec.copies_per_pair, "Augmented copies per pair")
      ->capture_default_str();
  augment_cmd->add_option("--seed", augment.spec.seed, "Random seed")
      ->envname("MREG_SEED")
      ->capture_default_str();
  augment_cmd->add_option("--hue-range", augment.spec.hue_range_deg, "Max hue shift in degrees")
      ->capture_default_str();
  augment_cmd->add_option("--saturation-range", augment.spec.saturation_range,
                          "Saturation scale drawn from [1-x, 1+x]")
      ->capture_default_str();
  augment_cmd->add_option("--value-range", augment.spec.value_range,
                          "Value scale drawn from [1-x, 1+x]")
      ->capture_default_str();

  ExportArgs exp;
  CLI::App* export_cmd = app.add_subcommand(
      "export-intermediates", "Write input/intermediate/target PNG triplets and a JSON manifest");
  export_cmd->add_option("--model", exp.model, "Layer file")->required();
  add_dataset_options(export_cmd, exp.data);
  export_cmd->add_option("--out-dir", exp.out_dir, "Output directory (created if missing)")->required();

  mreg::VerifyOptions verify;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the randomized solver oracle suite");
  verify_cmd->add_option("--seed", verify.seed, "Random seed")
      ->envname("MREG_SEED")
      ->capture_default_str();
  verify_cmd->add_option("--systems", verify.systems, "Random systems per property")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--max-samples", verify.max_samples, "Max training pairs per system")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_flag("--inject-lambda-mismatch", verify.inject_lambda_mismatch,
                       "Test hook: solve with the printed diagonal to force a failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*train_cmd) return cmd_train(train);
    if (*apply_cmd) return cmd_apply(apply);
    if (*eval_cmd) return cmd_eval(eval);
    if (*augment_cmd) return cmd_augment(augment);
    if (*export_cmd) return cmd_export(exp);
    if (*verify_cmd) return cmd_verify(verify);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
