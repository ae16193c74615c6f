// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Thresholds are fixed here and not configurable.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "mreg/dataset.hpp"
#include "mreg/error.hpp"
#include "mreg/evaluation.hpp"
#include "mreg/expression_layer.hpp"
#include "mreg/layer_io.hpp"
#include "mreg/ridge.hpp"
#include "mreg/synthetic.hpp"
#include "mreg/verify.hpp"
#include "support/test_support.hpp"

using namespace mreg;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Same 200 systems for optimality and gradient-descent agreement.
constexpr std::uint64_t kSystemsSeed = 20240501;
constexpr int kSystems = 200;

Outcome closed_form_optimality() {
  const VerifyOptions opt;  // N <= 10, r in {1,3,5}, lambda in {0.1,1,10}
  const auto t0 = std::chrono::steady_clock::now();
  const PropertyResult r = check_optimality(kSystemsSeed, kSystems, opt);
  const double secs = seconds_since(t0);
  const bool ok = r.passed && r.tolerance == 1e-4 && secs < 10.0;
  return {ok, "max |grad| " + fmt(r.worst) + " (tol 1e-4), " + fmt(secs) + " s (limit 10 s)" +
                  (r.detail.empty() ? "" : "; " + r.detail)};
}

Outcome oracle_equivalence() {
  const PropertyResult gd = check_oracle_agreement(kSystemsSeed, kSystems, VerifyOptions{});

  double hand = 0.0;
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const PixelSolution s = solve_ridge(one, Eigen::VectorXd::Ones(1), 1.0, RidgeVariant::kAsPrinted);
  hand = std::max({hand, std::abs(s.weights(0) - 1.0 / 3.0), std::abs(s.bias - 1.0 / 3.0)});
  for (const double lambda : {0.1, 1.0, 10.0})
    for (const int n : {1, 2, 3, 7}) {
      Eigen::VectorXd t(n);
      for (int i = 0; i < n; ++i) t(i) = 0.05 + 0.13 * i;
      const PixelSolution z =
          solve_ridge(Eigen::MatrixXd::Zero(n, 25), t, lambda, RidgeVariant::kAsPrinted);
      hand = std::max({hand, z.weights.cwiseAbs().maxCoeff(),
                       std::abs(z.bias - t.sum() / (lambda + n))});
    }
  const bool ok = gd.passed && gd.tolerance == 1e-6 && hand <= 1e-12;
  return {ok, "closed form vs gradient descent " + fmt(gd.worst) + " (tol 1e-6); hand cases " +
                  fmt(hand) + " (tol 1e-12)" + (gd.detail.empty() ? "" : "; " + gd.detail)};
}

Outcome property_suites() {
  const VerifyOptions opt;
  int failures = 0;
  double worst_lin = 0, worst_perm = 0, worst_shrink = 0;
  std::string first;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    for (const PropertyResult& r : {check_linearity(seed, 10, opt), check_permutation(seed, 10, opt),
                                    check_shrinkage(seed, 10, opt)}) {
      if (!r.passed) {
        ++failures;
        if (first.empty()) first = r.name + " seed " + std::to_string(seed) + ": " + r.detail;
      }
      if (r.name == "linearity") worst_lin = std::max(worst_lin, r.worst);
      if (r.name == "permutation") worst_perm = std::max(worst_perm, r.worst);
      if (r.name == "shrinkage") worst_shrink = std::max(worst_shrink, r.worst);
    }
  }
  return {failures == 0, "100 seeds x 10 systems; linearity rel " + fmt(worst_lin) +
                             " (tol 1e-10), permutation " + fmt(worst_perm) +
                             " (tol 1e-12), shrinkage growth " + fmt(worst_shrink) +
                             (first.empty() ? "" : "; " + first)};
}

Outcome desk_scale_learning() {
  SmileTaskSpec spec;
  spec.pairs = 60;
  spec.size = 16;
  spec.noise_sigma = 0.02;
  const auto [train, held] = split_dataset(make_smile_dataset(spec), 0.1);
  const auto t0 = std::chrono::steady_clock::now();
  TrainOptions single;
  single.threads = 1;
  const ExpressionLayer layer = train_expression_layer(train, RidgeConfig{}, single);
  const double secs = seconds_since(t0);
  const double trained = evaluate_layer(layer, held).mean.mae;
  const double baseline = evaluate_identity_baseline(held).mean.mae;
  const double ratio = baseline / trained;
  const bool ok = train.size() == 54 && held.size() == 6 && ratio >= 5.0 && secs < 30.0;
  return {ok, "held-out MAE " + fmt(trained) + " vs identity " + fmt(baseline) + " (ratio " +
                  fmt(ratio) + ", need >= 5); train " + fmt(secs) + " s single-threaded (limit 30 s)"};
}

Outcome determinism_and_serialization() {
  mreg::testing::TempDir dir("acceptance");
  SmileTaskSpec spec;
  spec.pairs = 12;
  spec.channels = 3;
  mreg::testing::write_dataset(make_smile_dataset(spec), dir / "neutral", dir / "smile");

  // Two end-to-end runs: load from disk, train, save.
  for (const char* name : {"run1.mreg", "run2.mreg"}) {
    const PairedDataset ds = load_paired_dataset(dir / "neutral", dir / "smile");
    TrainOptions opt;
    opt.threads = name[3] == '1' ? 1 : 4;
    save_layer(train_expression_layer(ds, RidgeConfig{}, opt), dir / name);
  }
  const auto a = read_file_bytes(dir / "run1.mreg");
  const bool runs_identical = a == read_file_bytes(dir / "run2.mreg");

  const ExpressionLayer loaded = load_layer(dir / "run1.mreg");
  save_layer(loaded, dir / "resaved.mreg");
  const bool round_trip = read_file_bytes(dir / "resaved.mreg") == a &&
                          loaded == deserialize_layer(serialize_layer(loaded));

  int detected = 0;
  const int trials = 32;
  for (int i = 0; i < trials; ++i) {
    auto corrupt = a;
    const std::size_t at = 40 + (static_cast<std::size_t>(i) * 7919) % (a.size() - 44);
    corrupt[at] ^= static_cast<std::uint8_t>(1u << (i % 8));
    try {
      deserialize_layer(corrupt);
    } catch (const LayerFormatError& e) {
      detected += std::string(e.what()).find("checksum") != std::string::npos;
    }
  }
  const bool ok = runs_identical && round_trip && detected == trials;
  return {ok, std::string("runs bit-identical: ") + (runs_identical ? "yes" : "no") +
                  ", load(save) bit-identical: " + (round_trip ? "yes" : "no") +
                  ", corruptions caught by CRC: " + std::to_string(detected) + "/" +
                  std::to_string(trials)};
}

Outcome verify_ten_seeds() {
  int zero_exits = 0;
  std::string codes;
  for (int seed = 1; seed <= 10; ++seed) {
    const std::string cmd = std::string(MREG_CLI_PATH) + " verify --seed " + std::to_string(seed) +
                            " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    zero_exits += code == 0;
    codes += (codes.empty() ? "" : ",") + std::to_string(code);
  }
  return {zero_exits == 10, "exit codes for seeds 1..10: " + codes};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form optimality", closed_form_optimality},
      {"oracle equivalence", oracle_equivalence},
      {"linearity/permutation/shrinkage suites", property_suites},
      {"desk-scale learning", desk_scale_learning},
      {"determinism and serialization", determinism_and_serialization},
      {"verify exits 0 on 10 seeds", verify_ten_seeds},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::printf("[%s] %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
