#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tacshade/sfs.hpp"

using namespace tacshade;

TEST_CASE("upwind newton height matches the closed-form root") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> nb(-5.0, 5.0), e(0.05, 0.999);
  for (int i = 0; i < 2000; ++i) {
    const double a = nb(rng), b = nb(rng), s = e(rng);
    const double expect = oracle::upwind_root(a, b, s);
    CHECK(upwind_newton_height(a, b, s, 1e-6) == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("upwind newton height at full shading returns the lower neighbour") {
  CHECK(upwind_newton_height(2.0, 3.0, 1.0, 1e-6) == 2.0);
  CHECK(upwind_newton_height(0.0, 0.0, 1.0, 1e-6) == 0.0);
}

TEST_CASE("newton derivative matches a finite difference of the reflectance") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0), c(-0.5, 0.5);
  for (int i = 0; i < 200; ++i) {
    const double p = u(rng), q = u(rng), pc = c(rng), qc = c(rng);
    const auto r = [&](double h) {
      const double pp = p + h, qq = q + h;
      return (pp * pc + qq * qc + 1.0) / (std::sqrt(pp * pp + qq * qq + 1.0) * std::sqrt(pc * pc + qc * qc + 1.0));
    };
    const double step = 1e-6;
    const double fd = -(r(step) - r(-step)) / (2 * step);
    CHECK(newton_derivative(p, q, pc, qc) == doctest::Approx(fd).epsilon(1e-5));
  }
  CHECK(newton_derivative(0.0, 0.0) == 0.0);
}

TEST_CASE("lambertian render matches explicit finite differences") {
  std::mt19937_64 rng(12);
  int ax = 0, ay = 0;
  const HeightField h = oracle::random_bump(rng, 30, ax, ay);
  const LambertianModel model{1.0, 1.0, 0.1, -0.2};
  const GreyscaleField g = lambertian_render(h, model);
  for (int y = 0; y < h.height(); ++y) {
    for (int x = 0; x < h.width(); ++x) {
      const double left = x > 0 ? h(x - 1, y) : 0.0;
      const double up = y > 0 ? h(x, y - 1) : 0.0;
      const double p = h(x, y) - left, q = h(x, y) - up;
      const double cosine = (p * 0.1 + q * -0.2 + 1.0) / (std::hypot(p, q, 1.0) * std::hypot(0.1, -0.2, 1.0));
      CHECK(g(x, y) == doctest::Approx(std::max(cosine, 0.0)).epsilon(1e-12));
    }
  }
  CHECK(lambertian_render(HeightField(5, 4)).values() == std::vector<double>(20, 1.0));
}

TEST_CASE("backward gradients pad with zero") {
  const Grid<double> h(2, 2, std::vector<double>{1, 3, 4, 8});
  const GradientField g = backward_gradients(h);
  CHECK(g.p.values() == std::vector<double>{1, 2, 4, 4});
  CHECK(g.q.values() == std::vector<double>{1, 3, 3, 5});
}

TEST_CASE("hybrid sfs of uniform full shading is exactly zero") {
  const HeightField h = hybrid_sfs(GreyscaleField(33, 21, 1.0));
  CHECK(std::all_of(h.values().begin(), h.values().end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("hybrid sfs recovers rendered bumps") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 5; ++i) {
    int ax = 0, ay = 0;
    const HeightField truth = oracle::random_bump(rng, 64, ax, ay);
    const HeightField rec = hybrid_sfs(lambertian_render(truth));
    CHECK(oracle::pearson(truth.values(), rec.values()) > 0.95);
    for (double v : rec.values()) CHECK(v >= 0.0);
  }
}

TEST_CASE("hybrid sfs validates its inputs") {
  CHECK_THROWS_AS(hybrid_sfs(GreyscaleField(3, 3, 1.5)), Error);
  ReconstructionConfig cfg;
  cfg.iterations = 0;
  CHECK_THROWS_AS(hybrid_sfs(GreyscaleField(3, 3, 1.0), cfg), Error);
}

TEST_CASE("greyscale algebra") {
  const GreyscaleField g(Grid<double>(3, 1, std::vector<double>{5, 1, 4}), ValueRange::Raw);
  const GreyscaleField g0(Grid<double>(3, 1, std::vector<double>{2, 3, 4}), ValueRange::Raw);
  CHECK(delta_greyscale(g, g0, true).values() == std::vector<double>{3, 0, 0});
  CHECK(delta_greyscale(g, g0, false).values() == std::vector<double>{3, -2, 0});
  const GreyscaleField n = normalize(g);
  CHECK(n.values() == std::vector<double>{1.0, 0.0, 0.75});
  CHECK(n.range == ValueRange::Normalized);
  CHECK(normalize(GreyscaleField(4, 2, 3.0)).values() == std::vector<double>(8, 0.0));
  CHECK(shape_weighted_greyscale(n, g0).values() == std::vector<double>{2.0, 0.0, 3.0});
  CHECK_THROWS_AS(shape_weighted_greyscale(g, g0), Error);
  CHECK_THROWS_AS(delta_greyscale(g, GreyscaleField(2, 1), true), Error);
}

TEST_CASE("scale height clips to the sensor radius") {
  const SensorGeometry geom = make_geometry(CircularMask{5, 5, 4}, 2.0, 3.0);
  CHECK(scale_height(HeightField(3, 1), geom).values() == std::vector<double>(3, 0.0));
  HeightField in(3, 1);
  in.values() = {-1.0, 0.5, 1.0};
  CHECK(scale_height(in, geom).values() == std::vector<double>{0.0, 1.5, 2.0});
}

TEST_CASE("lift of a zero field lies on the sphere") {
  const CircularMask mask{15.0, 12.0, 10.0};
  const SensorGeometry geom = make_geometry(mask, 20.0, 1.0);
  CHECK(geom.pixel_pitch_mm == doctest::Approx(2.0));
  const LiftResult lift = lift_to_hemisphere(HeightField(31, 25), geom);
  std::size_t in_mask = 0;
  for (int y = 0; y < 25; ++y) {
    for (int x = 0; x < 31; ++x) in_mask += mask.contains(x, y) ? 1 : 0;
  }
  CHECK(lift.in_mask == in_mask);
  CHECK(lift.skipped == 0);
  CHECK(lift.cloud.size() == in_mask);
  for (const Vec3& p : lift.cloud.points) {
    CHECK(std::abs(p.norm() - 20.0) < 1e-9);
    CHECK(p.z >= 0.0);
  }
}

TEST_CASE("lift moves deformed points inward and skips impossible ones") {
  const CircularMask mask{2.0, 2.0, 2.0};
  const SensorGeometry geom = make_geometry(mask, 10.0, 1.0);
  HeightField h(5, 5, 1.0);
  h(2, 2) = 3.0;
  // the four rim pixels sit at radius r, so any positive depth is impossible there
  const LiftResult lift = lift_to_hemisphere(h, geom);
  CHECK(lift.skipped == 4);
  CHECK(lift.cloud.size() == lift.in_mask - 4);
  for (std::size_t i = 0; i < lift.cloud.size(); ++i) {
    CHECK(lift.cloud.points[i].norm() == doctest::Approx(10.0 - lift.depths[i]));
  }
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(make_geometry(CircularMask{1, 1, 0}, 20.0, 1.0), Error);
  CHECK_THROWS_AS(make_geometry(CircularMask{1, 1, 1}, -1.0, 1.0), Error);
  CHECK_THROWS_AS(make_geometry(CircularMask{1, 1, 1}, 20.0, 0.0), Error);
  SensorGeometry g = make_geometry(CircularMask{1, 1, 1}, 20.0, 1.0, 0.5);
  CHECK(g.pixel_pitch_mm == 0.5);
  g.camera_p = 0.1;
  CHECK_THROWS_AS(validate_geometry(g), Error);
}
