#include <doctest.h>

#include <cmath>
#include <random>

#include "mreg/error.hpp"
#include "mreg/evaluation.hpp"
#include "mreg/layer_io.hpp"
#include "mreg/synthetic.hpp"
#include "support/test_support.hpp"

using namespace mreg;

TEST_CASE("pixel_metrics examples") {
  const Geometry g{3, 2, 1};
  SUBCASE("identical images") {
    const Image a = Image::filled(g, 0.3);
    const PixelMetrics m = pixel_metrics(a, a);
    CHECK(m.mae == 0.0);
    CHECK(m.mse == 0.0);
    CHECK(std::isinf(m.psnr_db));
    CHECK(m.psnr_db > 0);
  }
  SUBCASE("constant offset of 0.5") {
    const PixelMetrics m = pixel_metrics(Image::filled(g, 0.75), Image::filled(g, 0.25));
    CHECK(m.mae == 0.5);
    CHECK(m.mse == 0.25);
    CHECK(m.psnr_db == doctest::Approx(6.020599913279624).epsilon(1e-12));
  }
  SUBCASE("fixed pair matches frozen numpy values") {
    const Image a(g, {0.1, 0.5, 0.9, 0.3, 0.0, 1.0});
    const Image b(g, {0.2, 0.45, 0.6, 0.3, 0.25, 0.9});
    const PixelMetrics m = pixel_metrics(a, b);
    CHECK(m.mae == doctest::Approx(0.13333333333333333).epsilon(1e-12));
    CHECK(m.mse == doctest::Approx(0.029166666666666674).epsilon(1e-12));
    CHECK(m.psnr_db == doctest::Approx(15.35113201697349).epsilon(1e-12));
    const PixelMetrics r = pixel_metrics(b, a);
    CHECK(r.mae == m.mae);
    CHECK(r.mse == m.mse);
  }
  SUBCASE("geometry mismatch") {
    CHECK_THROWS_AS(pixel_metrics(Image::filled(g, 0), Image::filled(Geometry{2, 3, 1}, 0)),
                    GeometryError);
  }
}

TEST_CASE("metrics are symmetric on random pairs") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const Image a = mreg::testing::random_image(rng, Geometry{4, 5, 3});
    const Image b = mreg::testing::random_image(rng, Geometry{4, 5, 3});
    CHECK(pixel_metrics(a, b).mae == pixel_metrics(b, a).mae);
    CHECK(pixel_metrics(a, b).mse == pixel_metrics(b, a).mse);
  }
}

TEST_CASE("evaluate_layer examples") {
  std::mt19937_64 rng(2);
  const Geometry g{5, 5, 3};
  SUBCASE("identity layer on target = input data") {
    std::vector<ImagePair> pairs;
    for (int i = 0; i < 3; ++i) {
      const Image img = mreg::testing::random_image(rng, g);
      pairs.push_back({"p" + std::to_string(i), img, img});
    }
    const EvalReport report = evaluate_layer(ExpressionLayer::identity(g, 3), PairedDataset("id", pairs));
    CHECK(report.mean.mae == 0.0);
    CHECK(report.records.size() == 3);
    CHECK(std::isinf(report.mean.psnr_db));
    const nlohmann::json doc = report.to_json();
    CHECK(doc["mean"]["psnr_db"] == "inf");
    CHECK(doc["images"][0]["name"] == "p0");
    CHECK(doc.contains("fid"));
    CHECK(doc["fid"].is_null());
  }
  SUBCASE("constant layer against constant targets") {
    const PairedDataset ds("c", {{"a", mreg::testing::random_image(rng, g), Image::filled(g, 0.5)}});
    CHECK(evaluate_layer(ExpressionLayer::constant(g, 3, 0.5), ds).mean.mae == 0.0);
  }
  SUBCASE("aggregate means are the arithmetic mean of records") {
    const PairedDataset ds = mreg::testing::random_dataset(rng, 4, g);
    const ExpressionLayer layer = train_expression_layer(ds, {3, 1.0});
    const EvalReport report = evaluate_layer(layer, ds);
    double mae = 0, mse = 0, psnr = 0;
    for (const EvalRecord& r : report.records) {
      mae += r.metrics.mae;
      mse += r.metrics.mse;
      psnr += r.metrics.psnr_db;
    }
    CHECK(report.mean.mae == doctest::Approx(mae / 4));
    CHECK(report.mean.mse == doctest::Approx(mse / 4));
    CHECK(report.mean.psnr_db == doctest::Approx(psnr / 4));
    CHECK(report.model_hash == layer_hash(layer));
    CHECK(report.model_hash.rfind("crc32:", 0) == 0);
  }
  SUBCASE("geometry mismatch") {
    const PairedDataset ds = mreg::testing::random_dataset(rng, 1, g);
    CHECK_THROWS_AS(evaluate_layer(ExpressionLayer::identity(Geometry{4, 4, 3}, 3), ds), GeometryError);
  }
}

TEST_CASE("trained layer beats the copy-input baseline on a held-out split") {
  SmileTaskSpec spec;
  spec.pairs = 30;
  const auto [train, held] = split_dataset(make_smile_dataset(spec), 0.1);
  const ExpressionLayer layer = train_expression_layer(train, {5, 1.0});
  CHECK(evaluate_layer(layer, held).mean.mae < evaluate_identity_baseline(held).mean.mae);
}
