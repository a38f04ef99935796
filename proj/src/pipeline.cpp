#include "tacshade/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include "tacshade/image_core.hpp"
#include "tacshade/parallel.hpp"
#include "tacshade/pointcloud.hpp"

namespace tacshade {

namespace {

// White ratio in [0, 1], TV-denoised.
GreyscaleField smoothed_ratio(const BinaryImage& b, const PipelineConfig& cfg) {
  GreyscaleField ratio = ratio_convolution(b, cfg.window, cfg.stride);
  for (double& v : ratio.values()) v /= 255.0;
  ratio.range = ValueRange::Normalized;
  if (cfg.tvd_weight == 0.0 || cfg.tvd_iters == 0) return ratio;
  return tvd_denoise(ratio, cfg.tvd_weight, cfg.tvd_iters);
}

}  // namespace

GreyStages greyscale_stages(const RasterImage& frame, const RasterImage& g0, const PipelineConfig& cfg) {
  validate_config(cfg);
  if (!frame.same_shape(g0)) {
    throw Error(ErrorKind::Shape, "frame is " + std::to_string(frame.width()) + "x" + std::to_string(frame.height()) +
                                      " but g0 is " + std::to_string(g0.width()) + "x" + std::to_string(g0.height()));
  }
  GreyStages s;
  s.mask = cfg.mask ? *cfg.mask : estimate_mask(g0);
  validate_mask(s.mask, frame.width(), frame.height());

  const RasterImage masked = apply_circular_mask(frame, s.mask);
  const RasterImage masked0 = apply_circular_mask(g0, s.mask);
  s.threshold = cfg.threshold ? *cfg.threshold : otsu_threshold(masked0).value_or(256);
  s.binary = binarize(masked, s.threshold);
  s.binary0 = binarize(masked0, s.threshold);

  s.g = smoothed_ratio(s.binary, cfg);
  s.g0 = smoothed_ratio(s.binary0, cfg);
  s.g_d = delta_greyscale(s.g, s.g0, cfg.clamp_negative_gd);
  s.g_dn = normalize(s.g_d);
  s.g_h = shape_weighted_greyscale(s.g_dn, s.g0);
  s.g_hn = normalize(s.g_h);
  return s;
}

Reconstruction reconstruct(const RasterImage& frame, const RasterImage& g0, const PipelineConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (cfg.threads > 0) set_thread_count(cfg.threads);

  Reconstruction rec;
  rec.grey = greyscale_stages(frame, g0, cfg);
  rec.geometry = make_geometry(rec.grey.mask, cfg.radius_mm, cfg.alpha, cfg.pixel_pitch_mm);

  // The normalized greyscale read as a relief in pixel units, rendered under
  // the Lambertian model; the solver then recovers the relief.
  const double extent = std::max(frame.width(), frame.height());
  HeightField relief(frame.width(), frame.height());
  for (std::size_t i = 0; i < relief.size(); ++i) {
    relief.values()[i] = cfg.shading_contrast * extent * rec.grey.g_hn.values()[i];
  }
  rec.shading = lambertian_render(relief);

  ReconstructionConfig rc;
  rc.iterations = std::max(cfg.iterations, 1);
  rc.derivative_guard_eps = cfg.derivative_guard_eps;
  rc.clamp_negative_gd = cfg.clamp_negative_gd;
  rc.shading_floor = cfg.shading_floor;
  rec.height_px = hybrid_sfs(rec.shading, rc);

  HeightField relative(frame.width(), frame.height());
  for (std::size_t i = 0; i < relative.size(); ++i) relative.values()[i] = rec.height_px.values()[i] / extent;
  rec.height_mm = scale_height(relative, rec.geometry);

  rec.lift = lift_to_hemisphere(rec.height_mm, rec.geometry);
  rec.max_depth_mm = 0.0;
  for (std::size_t i = 0; i < rec.lift.depths.size(); ++i) rec.max_depth_mm = std::max(rec.max_depth_mm, rec.lift.depths[i]);

  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ContactCloud contact_cloud(const Reconstruction& rec) {
  const auto& depths = rec.lift.depths;
  if (depths.empty()) throw Error(ErrorKind::EmptyInput, "reconstruction produced no points");
  const auto [lo, hi] = std::minmax_element(depths.begin(), depths.end());
  if (*lo == *hi) return {rec.lift.cloud, depths};
  ClusterResult cluster = extract_contact_cluster(rec.lift.cloud, depths);
  ContactCloud out;
  out.cloud = std::move(cluster.cloud);
  out.depths.reserve(cluster.indices.size());
  for (std::size_t i : cluster.indices) out.depths.push_back(depths[i]);
  return out;
}

}  // namespace tacshade
