#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mreg/ridge.hpp"

namespace mreg {

struct VerifyOptions {
  std::uint64_t seed = 42;
  int systems = 200;
  int max_samples = 10;
  std::vector<int> radii = {1, 3, 5};
  std::vector<double> lambdas = {0.1, 1.0, 10.0};
  // Test hook: solve with the printed diagonal while checking against the
  // self-consistent loss, which must make "optimality" fail.
  bool inject_lambda_mismatch = false;
};

struct PropertyResult {
  std::string name;
  bool passed = true;
  int checked = 0;
  double worst = 0.0;      // largest observed violation measure
  double tolerance = 0.0;
  std::string detail;      // first failure, if any
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  double seconds = 0.0;

  bool all_passed() const;
  std::vector<std::string> failed() const;
};

/// Randomized oracle suite for the closed-form solver: finite-difference
/// optimality, gradient-descent and dense-solver agreement, hand-derived
/// systems, linearity in targets, permutation invariance and shrinkage.
VerifyReport run_verification(const VerifyOptions& options);

// Builds a PixelSystem from a random dataset of n pairs of (r+2)x(r+2)
// single-channel images at a random pixel (border pixels included).
PixelSystem random_pixel_system(std::mt19937_64& rng, int n, int r);

// Individual property suites, each over `count` random systems drawn from
// `seed`. Exposed for the acceptance suite.
PropertyResult check_optimality(std::uint64_t seed, int count, const VerifyOptions& options);
PropertyResult check_oracle_agreement(std::uint64_t seed, int count, const VerifyOptions& options);
PropertyResult check_dense_agreement(std::uint64_t seed, int count, const VerifyOptions& options);
PropertyResult check_hand_cases();
PropertyResult check_linearity(std::uint64_t seed, int count, const VerifyOptions& options);
PropertyResult check_permutation(std::uint64_t seed, int count, const VerifyOptions& options);
PropertyResult check_shrinkage(std::uint64_t seed, int count, const VerifyOptions& options);

}  // namespace mreg
