#include "mreg/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mreg/error.hpp"
#include "mreg/oracles.hpp"

namespace mreg {
namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

PairedDataset random_dataset(std::mt19937_64& rng, int n, Geometry g) {
  std::vector<ImagePair> pairs;
  for (int i = 0; i < n; ++i) {
    std::vector<double> in(g.size());
    std::vector<double> out(g.size());
    for (double& v : in) v = uniform01(rng);
    for (double& v : out) v = uniform01(rng);
    pairs.push_back({"p" + std::to_string(i), Image(g, std::move(in)), Image(g, std::move(out))});
  }
  return PairedDataset("random", std::move(pairs));
}

struct RandomCase {
  PairedDataset dataset;
  PixelCoord pixel;
  int r;
  double lambda;
  PixelSystem system;
};

RandomCase random_case(std::mt19937_64& rng, const VerifyOptions& options) {
  const int r = options.radii[rng() % options.radii.size()];
  const double lambda = options.lambdas[rng() % options.lambdas.size()];
  const int n = uniform_int(rng, 1, options.max_samples);
  const Geometry g{r + 2, r + 2, 1};
  PairedDataset ds = random_dataset(rng, n, g);
  const PixelCoord p{uniform_int(rng, 0, g.height - 1), uniform_int(rng, 0, g.width - 1)};
  PixelSystem sys = build_pixel_system(ds, 0, p, r);
  return {std::move(ds), p, r, lambda, std::move(sys)};
}

RidgeVariant solve_variant(const VerifyOptions& options) {
  return options.inject_lambda_mismatch ? RidgeVariant::kAsPrinted
                                        : RidgeVariant::kSelfConsistent;
}

std::string describe(const RandomCase& c, int index) {
  std::ostringstream os;
  os << "system " << index << " (N=" << c.system.design.rows() << ", r=" << c.r
     << ", lambda=" << c.lambda << ", pixel=" << c.pixel.row << "," << c.pixel.col << ")";
  return os.str();
}

void record(PropertyResult& result, double violation, const std::string& where) {
  ++result.checked;
  if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
  result.worst = std::max(result.worst, violation);
  if (violation > result.tolerance && result.passed) {
    result.passed = false;
    std::ostringstream os;
    os << where << ": " << violation << " > " << result.tolerance;
    result.detail = os.str();
  }
}

double max_abs_diff(const PixelSolution& a, const PixelSolution& b) {
  return (a.stacked() - b.stacked()).cwiseAbs().maxCoeff();
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.passed; });
}

std::vector<std::string> VerifyReport::failed() const {
  std::vector<std::string> names;
  for (const PropertyResult& p : properties)
    if (!p.passed) names.push_back(p.name);
  return names;
}

PixelSystem random_pixel_system(std::mt19937_64& rng, int n, int r) {
  const Geometry g{r + 2, r + 2, 1};
  const PairedDataset ds = random_dataset(rng, n, g);
  const PixelCoord p{uniform_int(rng, 0, g.height - 1), uniform_int(rng, 0, g.width - 1)};
  return build_pixel_system(ds, 0, p, r);
}

PropertyResult check_optimality(std::uint64_t seed, int count, const VerifyOptions& options) {
  PropertyResult result{"optimality", true, 0, 0.0, 1e-4, {}};
  std::mt19937_64 rng(seed);
  std::mt19937_64 perturb_rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int i = 0; i < count; ++i) {
    const RandomCase c = random_case(rng, options);
    const PixelSolution sol = solve_pixel(c.system, c.lambda, solve_variant(options));
    const Eigen::VectorXd grad = finite_difference_gradient(c.system, sol, c.lambda);
    record(result, grad.cwiseAbs().maxCoeff(), describe(c, i) + " gradient");

    // Random 1e-2 perturbations never decrease the loss.
    const double base = ridge_loss(c.system, sol, c.lambda);
    double worst_decrease = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
      Eigen::VectorXd dir(sol.stacked().size());
      for (Eigen::Index j = 0; j < dir.size(); ++j) dir(j) = 2.0 * uniform01(perturb_rng) - 1.0;
      const Eigen::VectorXd theta = sol.stacked() + 1e-2 * dir.normalized();
      worst_decrease = std::max(
          worst_decrease, base - ridge_loss(c.system, PixelSolution::from_stacked(theta), c.lambda));
    }
    // A decrease is a violation whatever its size; scale it past the tolerance.
    record(result, worst_decrease > 1e-14 ? result.tolerance + worst_decrease : 0.0,
           describe(c, i) + " perturbation decreased loss by");
  }
  return result;
}

PropertyResult check_oracle_agreement(std::uint64_t seed, int count, const VerifyOptions& options) {
  PropertyResult result{"oracle-agreement", true, 0, 0.0, 1e-6, {}};
  std::mt19937_64 rng(seed);
  GradientDescentOptions gd;
  gd.gradient_tolerance = 1e-11;
  for (int i = 0; i < count; ++i) {
    const RandomCase c = random_case(rng, options);
    const PixelSolution closed = solve_pixel(c.system, c.lambda, solve_variant(options));
    double diff;
    try {
      const PixelSolution iterative = gradient_descent_oracle(
          c.system, c.lambda, 2'000'000, safe_step_size(c.system, c.lambda), gd);
      diff = max_abs_diff(closed, iterative);
    } catch (const DivergenceError&) {
      diff = std::numeric_limits<double>::infinity();
    }
    record(result, diff, describe(c, i));
  }
  return result;
}

PropertyResult check_dense_agreement(std::uint64_t seed, int count, const VerifyOptions& options) {
  PropertyResult result{"dense-agreement", true, 0, 0.0, 1e-8, {}};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const RandomCase c = random_case(rng, options);
    const PixelSolution masked = solve_pixel(c.system, c.lambda, solve_variant(options));
    const PixelSolution dense = dense_ridge_solve(c.system.design, c.system.targets, c.lambda);
    record(result, max_abs_diff(masked, dense), describe(c, i) + " same design");
  }
  // When the unpadded window is exactly the image, the masked solve at the
  // centre is the global ridge solution.
  for (int i = 0; i < std::max(1, count / 10); ++i) {
    const int r = 2 * uniform_int(rng, 0, 2) + 1;
    const int n = uniform_int(rng, 1, options.max_samples);
    const PairedDataset ds = random_dataset(rng, n, Geometry{r, r, 1});
    const PixelCoord centre{r / 2, r / 2};
    const double lambda = options.lambdas[rng() % options.lambdas.size()];
    const PixelSolution masked =
        solve_pixel(build_pixel_system(ds, 0, centre, r), lambda, solve_variant(options));
    const DenseSolution dense = dense_ridge_oracle(ds, 0, centre, lambda);
    const double diff = std::max((masked.weights - dense.weights).cwiseAbs().maxCoeff(),
                                 std::abs(masked.bias - dense.bias));
    record(result, diff, "full-window r=" + std::to_string(r) + " N=" + std::to_string(n));
  }
  return result;
}

PropertyResult check_hand_cases() {
  PropertyResult result{"hand-cases", true, 0, 0.0, 1e-12, {}};
  const auto solve = [](Eigen::MatrixXd x, Eigen::VectorXd t, double lambda, RidgeVariant v) {
    return solve_ridge(x, t, lambda, v);
  };
  const Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
  const Eigen::VectorXd t_one = Eigen::VectorXd::Ones(1);

  PixelSolution s = solve(one, t_one, 1.0, RidgeVariant::kAsPrinted);
  record(result, std::max(std::abs(s.weights(0) - 1.0 / 3.0), std::abs(s.bias - 1.0 / 3.0)),
         "printed [[2,1],[1,2]] system");
  s = solve(one, t_one, 1.0, RidgeVariant::kSelfConsistent);
  record(result, std::max(std::abs(s.weights(0) - 0.4), std::abs(s.bias - 0.4)),
         "self-consistent [[1.5,1],[1,1.5]] system");

  const PixelSystem one_sys{one, t_one, {}, 0};
  record(result,
         std::abs(ridge_loss(one_sys, PixelSolution{Eigen::VectorXd::Constant(1, 1.0 / 3.0), 1.0 / 3.0},
                             1.0) -
                  2.0 / 9.0),
         "ridge loss 2/9");

  for (const double lambda : {0.1, 1.0, 10.0})
    for (const int n : {1, 2, 5}) {
      const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, 9);
      Eigen::VectorXd t(n);
      for (int i = 0; i < n; ++i) t(i) = 0.1 * (i + 1);
      for (const RidgeVariant v : {RidgeVariant::kAsPrinted, RidgeVariant::kSelfConsistent}) {
        s = solve(zero, t, lambda, v);
        const double expected = t.sum() / (system_diagonal(lambda, v) + n);
        record(result, std::max(s.weights.cwiseAbs().maxCoeff(), std::abs(s.bias - expected)),
               "zero design N=" + std::to_string(n));
      }
    }

  s = solve(Eigen::MatrixXd::Constant(3, 4, 0.5), Eigen::VectorXd::Zero(3), 1.0,
            RidgeVariant::kSelfConsistent);
  record(result, s.stacked().cwiseAbs().maxCoeff(), "zero targets");
  return result;
}

PropertyResult check_linearity(std::uint64_t seed, int count, const VerifyOptions& options) {
  PropertyResult result{"linearity", true, 0, 0.0, 1e-10, {}};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const RandomCase c = random_case(rng, options);
    const double scale = 6.0 * uniform01(rng) - 3.0;
    const RidgeVariant v = solve_variant(options);
    const Eigen::VectorXd base = solve_pixel(c.system, c.lambda, v).stacked();
    const Eigen::VectorXd scaled =
        solve_ridge(c.system.design, scale * c.system.targets, c.lambda, v).stacked();
    const Eigen::VectorXd expected = scale * base;
    const double denom = std::max(expected.norm(), 1e-300);
    record(result, expected.norm() == 0.0 ? scaled.norm() : (scaled - expected).norm() / denom,
           describe(c, i));
  }
  return result;
}

PropertyResult check_permutation(std::uint64_t seed, int count, const VerifyOptions& options) {
  PropertyResult result{"permutation", true, 0, 0.0, 1e-12, {}};
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    const RandomCase c = random_case(rng, options);
    std::vector<ImagePair> shuffled = c.dataset.pairs();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const PairedDataset permuted("random", std::move(shuffled));
    const RidgeVariant v = solve_variant(options);
    const PixelSolution a = solve_pixel(c.system, c.lambda, v);
    const PixelSolution b = solve_pixel(build_pixel_system(permuted, 0, c.pixel, c.r), c.lambda, v);
    record(result, max_abs_diff(a, b), describe(c, i));
  }
  return result;
}

PropertyResult check_shrinkage(std::uint64_t seed, int count, const VerifyOptions& options) {
  PropertyResult result{"shrinkage", true, 0, 0.0, 1e-12, {}};
  std::mt19937_64 rng(seed);
  const double grid[] = {0.01, 0.1, 1.0, 10.0, 100.0};
  for (int i = 0; i < count; ++i) {
    const RandomCase c = random_case(rng, options);
    double previous = std::numeric_limits<double>::infinity();
    double growth = 0.0;
    for (const double lambda : grid) {
      const double norm = solve_pixel(c.system, lambda, solve_variant(options)).stacked().norm();
      if (std::isfinite(previous)) growth = std::max(growth, norm - previous);
      previous = norm;
    }
    record(result, growth, describe(c, i) + " norm grew by");
  }
  return result;
}

VerifyReport run_verification(const VerifyOptions& options) {
  if (options.systems < 1 || options.max_samples < 1 || options.radii.empty() ||
      options.lambdas.empty())
    throw Error("verify needs at least one system, sample, radius and lambda");
  for (const int r : options.radii) check_receptive_field_size(r);
  for (const double l : options.lambdas) check_lambda(l);

  const auto start = std::chrono::steady_clock::now();
  // Optimality and oracle agreement share a seed: they see the same systems.
  const std::uint64_t s = options.seed;
  VerifyReport report;
  report.properties.push_back(check_optimality(s, options.systems, options));
  report.properties.push_back(check_oracle_agreement(s, options.systems, options));
  report.properties.push_back(check_dense_agreement(s + 1, options.systems, options));
  report.properties.push_back(check_hand_cases());
  report.properties.push_back(check_linearity(s + 2, options.systems, options));
  report.properties.push_back(check_permutation(s + 3, options.systems, options));
  report.properties.push_back(check_shrinkage(s + 4, options.systems, options));
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mreg
