#include "tacshade/pointcloud.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tacshade/error.hpp"
#include "tacshade/kdtree.hpp"

namespace tacshade {

namespace {

KdTree<3> tree3(const PointCloud& cloud) {
  std::vector<KdTree<3>::Point> pts;
  pts.reserve(cloud.size());
  for (const Vec3& p : cloud.points) pts.push_back({p.x, p.y, p.z});
  return KdTree<3>(std::move(pts));
}

// Sum of nearest-neighbour distances from every point of `from` into `index`.
double nearest_distance_sum(const PointCloud& from, const KdTree<3>& index) {
  const auto n = static_cast<std::ptrdiff_t>(from.size());
  std::vector<double> dist(from.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Vec3& p = from.points[static_cast<std::size_t>(i)];
    dist[static_cast<std::size_t>(i)] = std::sqrt(index.nearest({p.x, p.y, p.z}).second);
  }
  double sum = 0.0;
  for (double d : dist) sum += d;
  return sum;
}

void require_nonempty(const PointCloud& c, const char* what) {
  if (c.empty()) throw Error(ErrorKind::EmptyInput, std::string(what) + ": empty point cloud");
}

}  // namespace

ClusterResult extract_contact_cluster(const PointCloud& cloud, std::span<const double> depths) {
  require_nonempty(cloud, "extract_contact_cluster");
  if (depths.size() != cloud.size()) {
    throw Error(ErrorKind::Shape, "extract_contact_cluster: depth count does not match point count");
  }
  ClusterResult result;
  result.cloud.frame = cloud.frame;
  if (cloud.size() == 1) {
    result.cloud.points = cloud.points;
    result.indices = {0};
    result.low_mean = result.high_mean = depths[0];
    return result;
  }

  const auto [lo_it, hi_it] = std::minmax_element(depths.begin(), depths.end());
  if (*lo_it == *hi_it) {
    throw Error(ErrorKind::DegenerateCluster, "extract_contact_cluster: all depths are identical");
  }
  double low = *lo_it;
  double high = *hi_it;
  std::vector<char> deep(depths.size(), 0);
  bool first = true;
  for (int it = 0; it < 100; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < depths.size(); ++i) {
      const char assign = std::abs(depths[i] - high) <= std::abs(depths[i] - low) ? 1 : 0;
      if (assign != deep[i]) {
        deep[i] = assign;
        changed = true;
      }
    }
    result.iterations = it + 1;
    if (!changed && !first) break;
    first = false;
    double sum_low = 0.0, sum_high = 0.0;
    std::size_t n_low = 0, n_high = 0;
    for (std::size_t i = 0; i < depths.size(); ++i) {
      if (deep[i]) {
        sum_high += depths[i];
        ++n_high;
      } else {
        sum_low += depths[i];
        ++n_low;
      }
    }
    if (n_low > 0) low = sum_low / static_cast<double>(n_low);
    if (n_high > 0) high = sum_high / static_cast<double>(n_high);
  }

  // Hartigan refinement: move single points while that lowers the
  // within-cluster sum of squares.
  std::size_t n_high = static_cast<std::size_t>(std::count(deep.begin(), deep.end(), 1));
  std::size_t n_low = depths.size() - n_high;
  for (int pass = 0; pass < 100; ++pass) {
    bool moved = false;
    for (std::size_t i = 0; i < depths.size(); ++i) {
      const double x = depths[i];
      const bool from_deep = deep[i] != 0;
      const std::size_t n_from = from_deep ? n_high : n_low;
      const std::size_t n_to = from_deep ? n_low : n_high;
      if (n_from < 2) continue;
      const double m_from = from_deep ? high : low;
      const double m_to = from_deep ? low : high;
      const double gain = static_cast<double>(n_from) / static_cast<double>(n_from - 1) * (x - m_from) * (x - m_from);
      const double cost = static_cast<double>(n_to) / static_cast<double>(n_to + 1) * (x - m_to) * (x - m_to);
      if (cost >= gain * (1.0 - 1e-12)) continue;
      const double new_from = (m_from * static_cast<double>(n_from) - x) / static_cast<double>(n_from - 1);
      const double new_to = (m_to * static_cast<double>(n_to) + x) / static_cast<double>(n_to + 1);
      deep[i] = from_deep ? 0 : 1;
      if (from_deep) {
        --n_high;
        ++n_low;
        high = new_from;
        low = new_to;
      } else {
        --n_low;
        ++n_high;
        low = new_from;
        high = new_to;
      }
      moved = true;
    }
    if (!moved) break;
    double sum_low = 0.0, sum_high = 0.0;
    for (std::size_t i = 0; i < depths.size(); ++i) (deep[i] ? sum_high : sum_low) += depths[i];
    low = sum_low / static_cast<double>(n_low);
    high = sum_high / static_cast<double>(n_high);
  }

  if (high < low) {
    for (char& d : deep) d = d ? 0 : 1;
    std::swap(low, high);
  }
  result.low_mean = low;
  result.high_mean = high;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (deep[i]) {
      result.indices.push_back(i);
      result.cloud.points.push_back(cloud.points[i]);
    }
  }
  return result;
}

double mean_error(const PointCloud& recon, const PointCloud& truth) {
  require_nonempty(recon, "mean_error");
  require_nonempty(truth, "mean_error");
  return nearest_distance_sum(recon, tree3(truth)) / static_cast<double>(recon.size());
}

double chamfer_distance(const PointCloud& a, const PointCloud& b) {
  require_nonempty(a, "chamfer_distance");
  require_nonempty(b, "chamfer_distance");
  const double ab = nearest_distance_sum(a, tree3(b)) / static_cast<double>(a.size());
  const double ba = nearest_distance_sum(b, tree3(a)) / static_cast<double>(b.size());
  return ab + ba;
}

double similarity_degree(double d_cd, double h_max) {
  if (!(h_max > 0.0)) throw Error(ErrorKind::Domain, "similarity_degree: h_max must be positive");
  return 100.0 * (1.0 - d_cd / h_max);
}

EvalReport evaluate(const PointCloud& recon, const PointCloud& truth, double h_max) {
  EvalReport report;
  report.me_mm = mean_error(recon, truth);
  report.chamfer_mm = chamfer_distance(recon, truth);
  report.sd_percent = similarity_degree(report.chamfer_mm, h_max);
  report.h_max_mm = h_max;
  return report;
}

PointCloud transform(const PointCloud& cloud, const RigidTransform& pose) {
  PointCloud out;
  out.frame = cloud.frame;
  out.points.reserve(cloud.size());
  for (const Vec3& p : cloud.points) out.points.push_back(pose.apply(p));
  return out;
}

PointCloud stitch(std::span<const PointCloud> clouds, std::span<const RigidTransform> poses) {
  if (clouds.size() != poses.size()) {
    throw Error(ErrorKind::Shape, "stitch: " + std::to_string(clouds.size()) + " clouds but " +
                                      std::to_string(poses.size()) + " poses");
  }
  PointCloud out;
  out.frame = "world";
  std::size_t total = 0;
  for (const PointCloud& c : clouds) total += c.size();
  out.points.reserve(total);
  for (std::size_t i = 0; i < clouds.size(); ++i) {
    for (const Vec3& p : clouds[i].points) out.points.push_back(poses[i].apply(p));
  }
  return out;
}

PointCloud smooth_z(const PointCloud& cloud, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::Domain, "smooth_z: radius must be positive");
  std::vector<KdTree<2>::Point> xy;
  xy.reserve(cloud.size());
  for (const Vec3& p : cloud.points) xy.push_back({p.x, p.y});
  const KdTree<2> index(std::move(xy));

  PointCloud out = cloud;
  const auto n = static_cast<std::ptrdiff_t>(cloud.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Vec3& p = cloud.points[static_cast<std::size_t>(i)];
    const auto neighbours = index.within({p.x, p.y}, radius);
    double sum = 0.0;
    for (std::size_t j : neighbours) sum += cloud.points[j].z;
    out.points[static_cast<std::size_t>(i)].z = sum / static_cast<double>(neighbours.size());
  }
  return out;
}

Vec3 centroid(const PointCloud& cloud) {
  require_nonempty(cloud, "centroid");
  Vec3 c{};
  for (const Vec3& p : cloud.points) c = c + p;
  return (1.0 / static_cast<double>(cloud.size())) * c;
}

// RigidTransform -------------------------------------------------------------

RigidTransform::RigidTransform(const Mat3& rotation, Vec3 translation)
    : rotation_(rotation), translation_(translation) {
  for (double v : rotation) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Domain, "rotation has non-finite entries");
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += rotation[static_cast<std::size_t>(3 * k + i)] * rotation[static_cast<std::size_t>(3 * k + j)];
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-9) {
        throw Error(ErrorKind::Domain, "rotation is not orthonormal");
      }
    }
  }
  const Mat3& r = rotation;
  const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                     r[2] * (r[3] * r[7] - r[4] * r[6]);
  if (std::abs(det - 1.0) > 1e-9) throw Error(ErrorKind::Domain, "rotation determinant is not +1");
}

RigidTransform RigidTransform::rotation_z(double radians, Vec3 t) {
  const double c = std::cos(radians);
  const double s = std::sin(radians);
  return RigidTransform({c, -s, 0, s, c, 0, 0, 0, 1}, t);
}

Vec3 RigidTransform::apply(Vec3 p) const noexcept {
  const Mat3& r = rotation_;
  return {r[0] * p.x + r[1] * p.y + r[2] * p.z + translation_.x,
          r[3] * p.x + r[4] * p.y + r[5] * p.z + translation_.y,
          r[6] * p.x + r[7] * p.y + r[8] * p.z + translation_.z};
}

RigidTransform RigidTransform::inverse() const {
  const Mat3& r = rotation_;
  const Mat3 rt{r[0], r[3], r[6], r[1], r[4], r[7], r[2], r[5], r[8]};
  RigidTransform inv;
  inv.rotation_ = rt;
  const Vec3 t = translation_;
  inv.translation_ = {-(rt[0] * t.x + rt[1] * t.y + rt[2] * t.z), -(rt[3] * t.x + rt[4] * t.y + rt[5] * t.z),
                      -(rt[6] * t.x + rt[7] * t.y + rt[8] * t.z)};
  return inv;
}

}  // namespace tacshade
