#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "tacshade/kdtree.hpp"
#include "tacshade/pointcloud.hpp"

using namespace tacshade;

TEST_CASE("kd-tree nearest and radius queries match a linear scan") {
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<KdTree<3>::Point> pts(1 + trial * 37);
    for (auto& p : pts) p = {std::round(u(rng)), std::round(u(rng)), u(rng) > 0 ? 1.0 : 0.0};
    const KdTree<3> tree(pts);
    for (int q = 0; q < 50; ++q) {
      const KdTree<3>::Point query{u(rng), u(rng), u(rng)};
      std::size_t best = 0;
      double best_d2 = std::numeric_limits<double>::infinity();
      std::vector<std::size_t> near;
      const double radius = 3.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d2 = KdTree<3>::squared_distance(pts[i], query);
        if (d2 < best_d2) {
          best_d2 = d2;
          best = i;
        }
        if (d2 <= radius * radius) near.push_back(i);
      }
      const auto [idx, d2] = tree.nearest(query);
      CHECK(idx == best);
      CHECK(d2 == best_d2);
      CHECK(tree.within(query, radius) == near);
    }
  }
}

TEST_CASE("kd-tree ties resolve to the lowest index") {
  const KdTree<2> tree({{1, 0}, {0, 1}, {-1, 0}, {1, 0}});
  CHECK(tree.nearest({0, 0}).first == 0);
  CHECK(tree.nearest({1, 0}).first == 0);
  CHECK(KdTree<2>().nearest({0, 0}).second == std::numeric_limits<double>::infinity());
}

TEST_CASE("mean error and chamfer distance match the oracle") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const PointCloud a = oracle::random_cloud(rng, 1 + 13 * i, 5.0);
    const PointCloud b = oracle::random_cloud(rng, 1 + 7 * i, 5.0);
    CHECK(mean_error(a, b) == doctest::Approx(oracle::mean_error(a, b)).epsilon(1e-12));
    CHECK(chamfer_distance(a, b) == doctest::Approx(oracle::chamfer(a, b)).epsilon(1e-12));
    CHECK(chamfer_distance(a, b) == doctest::Approx(chamfer_distance(b, a)).epsilon(1e-12));
    CHECK(mean_error(a, a) == 0.0);
  }
}

TEST_CASE("evaluate on translated copies") {
  std::mt19937_64 rng(22);
  PointCloud a = oracle::random_cloud(rng, 50, 1.0);
  for (Vec3& p : a.points) p.z = 0.0;
  PointCloud far = a;
  for (Vec3& p : far.points) p.z += 100.0;
  const EvalReport r = evaluate(a, far, 10.0);
  CHECK(r.chamfer_mm == doctest::Approx(200.0).epsilon(1e-9));
  CHECK(r.sd_percent == doctest::Approx(-1900.0));
  const EvalReport same = evaluate(a, a, 3.0);
  CHECK(same.me_mm == 0.0);
  CHECK(same.sd_percent == 100.0);
  CHECK_THROWS_AS(evaluate(a, PointCloud{}, 1.0), Error);
  CHECK_THROWS_AS(similarity_degree(1.0, 0.0), Error);
}

TEST_CASE("contact cluster equals the exact two-way split on separated modes") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::size_t count = 2 + static_cast<std::size_t>(u(rng) * 60);
    PointCloud cloud;
    std::vector<double> depths;
    for (std::size_t k = 0; k < count; ++k) {
      cloud.points.push_back({static_cast<double>(k), 0.0, 0.0});
      depths.push_back(u(rng) < 0.4 ? 12.0 + n(rng) : n(rng));
    }
    const ClusterResult r = extract_contact_cluster(cloud, depths);
    CHECK(r.indices == oracle::optimal_deep_cluster(depths));
    CHECK(r.high_mean > r.low_mean);
    REQUIRE(r.cloud.size() == r.indices.size());
    for (std::size_t k = 0; k < r.indices.size(); ++k) CHECK(r.cloud.points[k].x == static_cast<double>(r.indices[k]));
  }
}

TEST_CASE("no single-point move lowers the within-cluster sum of squares") {
  std::mt19937_64 rng(28);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const std::size_t count = 3 + static_cast<std::size_t>(u(rng) * 40);
    PointCloud cloud;
    std::vector<double> depths;
    for (std::size_t k = 0; k < count; ++k) {
      cloud.points.push_back({});
      depths.push_back(u(rng) < 0.4 ? 3.0 + n(rng) : n(rng));
    }
    const ClusterResult r = extract_contact_cluster(cloud, depths);
    std::vector<char> deep(count, 0);
    for (std::size_t k : r.indices) deep[k] = 1;
    const auto sse = [&](const std::vector<char>& lab) {
      double total = 0.0;
      for (char side : {0, 1}) {
        double sum = 0.0;
        std::size_t cnt = 0;
        for (std::size_t k = 0; k < count; ++k) {
          if (lab[k] == side) {
            sum += depths[k];
            ++cnt;
          }
        }
        if (cnt == 0) return std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < count; ++k) {
          if (lab[k] == side) total += (depths[k] - sum / cnt) * (depths[k] - sum / cnt);
        }
      }
      return total;
    };
    const double base = sse(deep);
    CHECK(r.high_mean > r.low_mean);
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<char> moved = deep;
      moved[k] = moved[k] ? 0 : 1;
      CHECK(sse(moved) >= base * (1.0 - 1e-9));
    }
  }
}

TEST_CASE("contact cluster edge cases") {
  PointCloud one;
  one.points = {{1, 2, 3}};
  const std::vector<double> d1{0.5};
  const ClusterResult r = extract_contact_cluster(one, d1);
  CHECK(r.indices == std::vector<std::size_t>{0});
  CHECK(r.cloud.points.size() == 1);

  PointCloud two;
  two.points = {{0, 0, 0}, {1, 0, 0}};
  const std::vector<double> same{2.0, 2.0};
  try {
    extract_contact_cluster(two, same);
    FAIL("expected DegenerateCluster");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateCluster);
  }
  const std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(extract_contact_cluster(two, wrong), Error);
  CHECK_THROWS_AS(extract_contact_cluster(PointCloud{}, std::vector<double>{}), Error);
}

TEST_CASE("smooth_z matches a brute-force neighbourhood mean") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 10; ++i) {
    const PointCloud c = oracle::random_cloud(rng, 20 + 30 * i, 4.0);
    const double radius = 0.5 + 0.3 * i;
    const PointCloud s = smooth_z(c, radius);
    REQUIRE(s.size() == c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      double sum = 0.0;
      const auto nb = oracle::within_xy(c, c.points[k], radius);
      for (std::size_t j : nb) sum += c.points[j].z;
      CHECK(s.points[k].z == sum / static_cast<double>(nb.size()));
      CHECK(s.points[k].x == c.points[k].x);
      CHECK(s.points[k].y == c.points[k].y);
    }
  }
}

TEST_CASE("smooth_z with a radius covering the cloud flattens it and is idempotent") {
  std::mt19937_64 rng(25);
  const PointCloud c = oracle::random_cloud(rng, 40, 1.0);
  const PointCloud s = smooth_z(c, 100.0);
  for (const Vec3& p : s.points) CHECK(p.z == doctest::Approx(s.points[0].z));
  CHECK(s.points[0].z == doctest::Approx(centroid(c).z));
  const PointCloud t = smooth_z(s, 100.0);
  for (std::size_t k = 0; k < s.size(); ++k) CHECK(t.points[k].z == doctest::Approx(s.points[k].z).epsilon(1e-12));
  CHECK_THROWS_AS(smooth_z(c, 0.0), Error);
}

TEST_CASE("stitch applies each pose and concatenates in order") {
  std::mt19937_64 rng(26);
  const PointCloud a = oracle::random_cloud(rng, 5, 1.0);
  const PointCloud b = oracle::random_cloud(rng, 7, 1.0);
  const std::vector<PointCloud> clouds{a, b};
  const std::vector<RigidTransform> poses{RigidTransform::translation({1, 2, 3}),
                                          RigidTransform::rotation_z(std::numbers::pi / 2, {0, 0, 0})};
  const PointCloud s = stitch(clouds, poses);
  REQUIRE(s.size() == 12);
  CHECK(s.frame == "world");
  CHECK(s.points[0].x == doctest::Approx(a.points[0].x + 1));
  CHECK(s.points[4].z == doctest::Approx(a.points[4].z + 3));
  CHECK(s.points[5].x == doctest::Approx(-b.points[0].y));
  CHECK(s.points[5].y == doctest::Approx(b.points[0].x));
  const std::vector<RigidTransform> one{RigidTransform()};
  CHECK_THROWS_AS(stitch(clouds, one), Error);

  const std::vector<RigidTransform> ids{RigidTransform(), RigidTransform()};
  const PointCloud cat = stitch(clouds, ids);
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(cat.points[k] == a.points[k]);
  for (std::size_t k = 0; k < b.size(); ++k) CHECK(cat.points[a.size() + k] == b.points[k]);
}

TEST_CASE("rigid transform validation and inverse") {
  CHECK_THROWS_AS(RigidTransform({2, 0, 0, 0, 1, 0, 0, 0, 1}, {}), Error);
  CHECK_THROWS_AS(RigidTransform({1, 0, 0, 0, 1, 0, 0, 0, -1}, {}), Error);
  CHECK_THROWS_AS(RigidTransform({NAN, 0, 0, 0, 1, 0, 0, 0, 1}, {}), Error);
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 50; ++i) {
    const RigidTransform t = RigidTransform::rotation_z(u(rng), {u(rng), u(rng), u(rng)});
    const Vec3 p{u(rng), u(rng), u(rng)};
    const Vec3 back = t.inverse().apply(t.apply(p));
    CHECK(back.x == doctest::Approx(p.x));
    CHECK(back.y == doctest::Approx(p.y));
    CHECK(back.z == doctest::Approx(p.z));
    const Vec3 q = t.apply(p) - t.apply(Vec3{});
    CHECK(q.norm() == doctest::Approx(p.norm()));
  }
}
