#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tacshade/image_core.hpp"

using namespace tacshade;

namespace {

RasterImage random_raster(std::mt19937_64& rng, int w, int h, int levels) {
  RasterImage img(w, h);
  std::uniform_int_distribution<int> v(0, levels - 1);
  for (auto& p : img.values()) p = static_cast<std::uint8_t>(v(rng) * (255 / std::max(levels - 1, 1)));
  return img;
}

}  // namespace

TEST_CASE("otsu threshold matches the exhaustive oracle") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const int levels = 2 + i % 40;
    const RasterImage img = random_raster(rng, 1 + i % 23, 1 + i % 17, levels);
    CHECK(otsu_threshold(img) == oracle::otsu(img));
  }
}

TEST_CASE("otsu on a two-level image separates the levels") {
  RasterImage img(4, 1, std::vector<std::uint8_t>{10, 10, 200, 200});
  const auto t = otsu_threshold(img);
  REQUIRE(t.has_value());
  CHECK(*t > 10);
  CHECK(*t <= 200);
  const BinaryImage b = binarize(img);
  CHECK(b.values() == std::vector<std::uint8_t>{0, 0, 1, 1});
}

TEST_CASE("constant image has no threshold and binarizes to zeros") {
  const RasterImage img(5, 3, 77);
  CHECK_FALSE(otsu_threshold(img).has_value());
  const BinaryImage b = binarize(img);
  CHECK(std::all_of(b.values().begin(), b.values().end(), [](auto v) { return v == 0; }));
}

TEST_CASE("fixed threshold overrides otsu") {
  RasterImage img(3, 1, std::vector<std::uint8_t>{0, 100, 101});
  CHECK(binarize(img, 101).values() == std::vector<std::uint8_t>{0, 0, 1});
  CHECK(binarize(img, 0).values() == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("ratio convolution equals the brute-force window counter") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 60; ++i) {
    const BinaryImage b = oracle::random_binary(rng, 1 + i % 31, 1 + (i * 7) % 29, 0.1 + 0.8 * (i % 5) / 4.0);
    for (int w : {1, 3, 5, 9, 21}) {
      for (int h : {1, 3, 7}) {
        CHECK(ratio_convolution(b, Window{w, h}).values() == oracle::window_count_ratio(b, w, h).values());
      }
    }
  }
}

TEST_CASE("ratio convolution of uniform images") {
  CHECK(ratio_convolution(BinaryImage(9, 7, 1)).values() == std::vector<double>(63, 255.0));
  CHECK(ratio_convolution(BinaryImage(9, 7, 0)).values() == std::vector<double>(63, 0.0));
}

TEST_CASE("ratio convolution with stride samples exactly on the coarse grid") {
  std::mt19937_64 rng(3);
  const BinaryImage b = oracle::random_binary(rng, 40, 33, 0.5);
  const Grid<double> exact = oracle::window_count_ratio(b, 9, 9);
  for (int stride : {2, 3, 5}) {
    const GreyscaleField g = ratio_convolution(b, Window{9, 9}, stride);
    for (int y = 0; y < b.height(); y += stride) {
      for (int x = 0; x < b.width(); x += stride) CHECK(g(x, y) == exact(x, y));
    }
    const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
    CHECK(*lo >= 0.0);
    CHECK(*hi <= 255.0);
  }
}

TEST_CASE("invalid windows are rejected") {
  const BinaryImage b(5, 5);
  CHECK_THROWS_AS(ratio_convolution(b, Window{4, 5}), Error);
  CHECK_THROWS_AS(ratio_convolution(b, Window{0, 1}), Error);
  CHECK_THROWS_AS(ratio_convolution(b, Window{3, 3}, 0), Error);
  try {
    ratio_convolution(b, Window{2, 3});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidWindow);
  }
}

TEST_CASE("circular mask application and estimation") {
  RasterImage img(41, 31, 200);
  const CircularMask mask{20.0, 15.0, 10.0};
  const RasterImage masked = apply_circular_mask(img, mask);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) CHECK(masked(x, y) == (mask.contains(x, y) ? 200 : 0));
  }
  const CircularMask est = estimate_mask(masked);
  CHECK(est.center_x == doctest::Approx(20.0));
  CHECK(est.center_y == doctest::Approx(15.0));
  CHECK(est.radius == doctest::Approx(10.0).epsilon(0.1));
  CHECK_THROWS_AS(estimate_mask(RasterImage(4, 4)), Error);
  CHECK_THROWS_AS(apply_circular_mask(img, CircularMask{50.0, 5.0, 3.0}), Error);
  CHECK_THROWS_AS(apply_circular_mask(img, CircularMask{5.0, 5.0, 0.0}), Error);
}

TEST_CASE("tvd with zero weight is the identity") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(100.0, 20.0);
  GreyscaleField g(17, 11);
  for (double& v : g.values()) v = n(rng);
  CHECK(tvd_denoise(g, 0.0, 10) == g);
}

TEST_CASE("tvd never increases the objective and stays in range") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    GreyscaleField g(2 + i % 19, 1 + i % 13);
    for (double& v : g.values()) v = u(rng);
    const double w = 0.01 + 0.1 * i;
    const GreyscaleField x = tvd_denoise(g, w, 1 + i * 5);
    CHECK(tv_objective(g, x, w) <= tv_objective(g, g, w));
    const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
    for (double v : x.values()) {
      CHECK(v >= *lo);
      CHECK(v <= *hi);
    }
  }
}

TEST_CASE("tvd reduces noise and keeps a step edge") {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 0.05);
  GreyscaleField clean(40, 20), g(40, 20);
  for (int y = 0; y < 20; ++y) {
    for (int x = 0; x < 40; ++x) {
      clean(x, y) = x < 20 ? 0.2 : 0.8;
      g(x, y) = clean(x, y) + n(rng);
    }
  }
  const GreyscaleField x = tvd_denoise(g, 0.1, 100);
  double err_in = 0, err_out = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err_in += std::abs(g.values()[i] - clean.values()[i]);
    err_out += std::abs(x.values()[i] - clean.values()[i]);
  }
  CHECK(err_out < 0.5 * err_in);
  double left = 0, right = 0;
  for (int y = 0; y < 20; ++y) {
    left += x(18, y);
    right += x(21, y);
  }
  CHECK(right / 20 - left / 20 > 0.5);
}

TEST_CASE("tv objective by hand") {
  const Grid<double> ref(2, 2, std::vector<double>{0, 0, 0, 0});
  const Grid<double> x(2, 2, std::vector<double>{1, 0, 0, 0});
  // fidelity 1, TV |0-1| + |0-1| = 2
  CHECK(tv_objective(ref, x, 0.5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(tvd_denoise(GreyscaleField(2, 2), -1.0, 5), Error);
  CHECK_THROWS_AS(tvd_denoise(GreyscaleField(2, 2), 1.0, 0), Error);
}
