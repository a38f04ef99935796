#pragma once

#include <span>
#include <vector>

#include "tacshade/geometry.hpp"

namespace tacshade {

struct ClusterResult {
  PointCloud cloud;
  std::vector<std::size_t> indices;  // into the input cloud, ascending
  double low_mean = 0.0;
  double high_mean = 0.0;
  int iterations = 0;
};

/// 1-D K-means (k = 2) on per-point depth, seeded at the minimum and maximum
/// depth, Lloyd iterations until the assignment stops changing (at most 100),
/// then Hartigan single-point moves while they lower the sum of squares.
/// A depth equidistant from both centroids joins the deeper cluster. Returns
/// the cluster with the larger mean depth.
ClusterResult extract_contact_cluster(const PointCloud& cloud, std::span<const double> depths);

/// Mean over `recon` of the distance to the nearest point of `truth`.
double mean_error(const PointCloud& recon, const PointCloud& truth);

/// Mean nearest-neighbour distance a->b plus mean nearest-neighbour distance b->a.
double chamfer_distance(const PointCloud& a, const PointCloud& b);

/// 100 * (1 - d_cd / h_max), in percent.
double similarity_degree(double d_cd, double h_max);

struct EvalReport {
  double me_mm = 0.0;
  double chamfer_mm = 0.0;
  double sd_percent = 0.0;
  double h_max_mm = 0.0;
};

EvalReport evaluate(const PointCloud& recon, const PointCloud& truth, double h_max);

PointCloud transform(const PointCloud& cloud, const RigidTransform& pose);

/// Maps each cloud by its pose into the common frame and concatenates in order.
PointCloud stitch(std::span<const PointCloud> clouds, std::span<const RigidTransform> poses);

/// Replaces every z by the mean z of all points within `radius` in x-y
/// (the point itself included). Neighbours are summed in index order.
PointCloud smooth_z(const PointCloud& cloud, double radius);

Vec3 centroid(const PointCloud& cloud);

}  // namespace tacshade
