#include <doctest.h>

#include <random>

#include "mreg/augmentation.hpp"
#include "mreg/error.hpp"
#include "support/test_support.hpp"

using namespace mreg;

namespace {

Image rgb_pixel(double r, double g, double b) { return Image(Geometry{1, 1, 3}, {r, g, b}); }

// Saturation in [0.2, 0.75] and value in [0.2, 0.8]: default jitter never clips.
Image moderate_image(std::mt19937_64& rng, Geometry g) {
  std::vector<double> data(g.size());
  const std::size_t plane = g.plane_size();
  for (std::size_t i = 0; i < plane; ++i) {
    const Hsv hsv{360.0 * mreg::testing::uniform01(rng), 0.2 + 0.55 * mreg::testing::uniform01(rng),
                  0.2 + 0.6 * mreg::testing::uniform01(rng)};
    hsv_to_rgb(hsv, data[i], data[plane + i], data[2 * plane + i]);
  }
  return Image(g, std::move(data));
}

PairedDataset moderate_dataset(std::mt19937_64& rng, int n, Geometry g) {
  std::vector<ImagePair> pairs;
  for (int i = 0; i < n; ++i)
    pairs.push_back({"p" + std::to_string(i), moderate_image(rng, g), moderate_image(rng, g)});
  return PairedDataset("aug", std::move(pairs));
}

}  // namespace

TEST_CASE("HSV conversion matches frozen colorsys values") {
  // colorsys.hsv_to_rgb(30/360, 1, 1) = (1, 0.5, 0)
  const Image red = apply_color_transform(rgb_pixel(1, 0, 0), {30.0, 1.0, 1.0});
  CHECK(red.at(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(red.at(1, 0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(red.at(2, 0, 0) == doctest::Approx(0.0));

  const Hsv hsv = rgb_to_hsv(0.8, 0.3, 0.2);
  CHECK(hsv.h == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(hsv.s == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(hsv.v == doctest::Approx(0.8).epsilon(1e-12));

  // colorsys: hue +100 deg, s x0.5, v x1.1 -> (0.605, 0.88, 0.55)
  const Image out = apply_color_transform(rgb_pixel(0.8, 0.3, 0.2), {100.0, 0.5, 1.1});
  CHECK(out.at(0, 0, 0) == doctest::Approx(0.605).epsilon(1e-12));
  CHECK(out.at(1, 0, 0) == doctest::Approx(0.88).epsilon(1e-12));
  CHECK(out.at(2, 0, 0) == doctest::Approx(0.55).epsilon(1e-12));
}

TEST_CASE("zero-magnitude ranges leave images unchanged") {
  std::mt19937_64 rng(1);
  const Image a = mreg::testing::random_image(rng, Geometry{4, 4, 3});
  const Image b = mreg::testing::random_image(rng, Geometry{4, 4, 3});
  AugmentSpec spec;
  spec.hue_range_deg = spec.saturation_range = spec.value_range = 0.0;
  const auto [x, y] = augment_pair(a, b, spec, 0, 1);
  CHECK(x == a);
  CHECK(y == b);
}

TEST_CASE("augment_pair is deterministic and applies one transform to both images") {
  std::mt19937_64 rng(2);
  const Image a = moderate_image(rng, Geometry{5, 5, 3});
  const Image b = moderate_image(rng, Geometry{5, 5, 3});
  const AugmentSpec spec;
  const auto first = augment_pair(a, b, spec, 3, 2);
  const auto second = augment_pair(a, b, spec, 3, 2);
  CHECK(first.first == second.first);
  CHECK(first.second == second.second);
  CHECK_FALSE(augment_pair(a, b, spec, 3, 3).first == first.first);

  const ColorTransform t = sample_color_transform(spec, 3, 2);
  CHECK(std::abs(t.hue_shift_deg) <= 25.0);
  CHECK(t.saturation_scale >= 0.7);
  CHECK(t.saturation_scale <= 1.3);
  CHECK(t.value_scale >= 0.85);
  CHECK(t.value_scale <= 1.15);
  CHECK(first.first == apply_color_transform(a, t));
  CHECK(first.second == apply_color_transform(b, t));
}

TEST_CASE("grayscale input is rejected") {
  const Image gray = Image::filled(Geometry{2, 2, 1}, 0.5);
  CHECK_THROWS_AS(augment_pair(gray, gray, AugmentSpec{}, 0, 1), Error);
  const PairedDataset ds("g", {{"a", gray, gray}});
  CHECK_THROWS_AS(augment_dataset(ds, AugmentSpec{}), Error);
}

TEST_CASE("AugmentSpec validation") {
  AugmentSpec spec;
  spec.saturation_range = 1.0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.value_range = -0.1;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  spec.copies_per_pair = -1;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = {};
  CHECK(spec.copies_per_pair == 10);
  CHECK(spec.hue_range_deg == 25.0);
}

TEST_CASE("augment_dataset counts, identity and determinism") {
  std::mt19937_64 rng(3);
  const PairedDataset ds = moderate_dataset(rng, 5, Geometry{4, 4, 3});
  const PairedDataset out = augment_dataset(ds, AugmentSpec{});
  CHECK(out.size() == 55);
  CHECK(out[0].name == "p0");
  CHECK(out[1].name == "p0_aug1");
  CHECK(out[11].name == "p1");
  CHECK(out[0].input == ds[0].input);

  AugmentSpec none;
  none.copies_per_pair = 0;
  const PairedDataset same = augment_dataset(ds, none);
  REQUIRE(same.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) CHECK(same[i].input == ds[i].input);

  const PairedDataset again = augment_dataset(ds, AugmentSpec{});
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(again[i].input == out[i].input);
    CHECK(again[i].target == out[i].target);
  }
  AugmentSpec other;
  other.seed = 43;
  CHECK_FALSE(augment_dataset(ds, other)[1].input == out[1].input);
}

TEST_CASE("inverse transform recovers both images of every augmented pair") {
  std::mt19937_64 rng(4);
  const PairedDataset ds = moderate_dataset(rng, 4, Geometry{6, 6, 3});
  AugmentSpec spec;
  spec.copies_per_pair = 5;
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto [x, y] = augment_pair(ds[i].input, ds[i].target, spec, i, k);
      const ColorTransform inv = sample_color_transform(spec, i, k).inverse();
      const Image rx = apply_color_transform(x, inv);
      const Image ry = apply_color_transform(y, inv);
      for (std::size_t j = 0; j < rx.data().size(); ++j) {
        CHECK(std::abs(rx.data()[j] - ds[i].input.data()[j]) <= 2.0 / 255.0);
        CHECK(std::abs(ry.data()[j] - ds[i].target.data()[j]) <= 2.0 / 255.0);
      }
    }
}

TEST_CASE("pure hue shifts preserve geometry and HSV value ordering") {
  std::mt19937_64 rng(5);
  const Image img = mreg::testing::random_image(rng, Geometry{5, 7, 3});
  for (const double shift : {-25.0, 10.0, 90.0, 179.0}) {
    const Image out = apply_color_transform(img, {shift, 1.0, 1.0});
    REQUIRE(out.geometry() == img.geometry());
    const std::size_t plane = img.geometry().plane_size();
    auto value = [plane](const Image& im, std::size_t i) {
      return rgb_to_hsv(im.data()[i], im.data()[plane + i], im.data()[2 * plane + i]).v;
    };
    for (std::size_t i = 0; i < plane; ++i) {
      CHECK(value(out, i) == doctest::Approx(value(img, i)).epsilon(1e-12));
      for (std::size_t j = 0; j < plane; ++j)
        if (value(img, i) < value(img, j) - 1e-12) CHECK(value(out, i) < value(out, j));
    }
  }
}
