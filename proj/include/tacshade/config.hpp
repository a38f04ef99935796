#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "tacshade/image.hpp"
#include "tacshade/image_core.hpp"

namespace tacshade {

/// Every tunable of the reconstruction pipeline.
struct PipelineConfig {
  Window window{};
  int stride = 1;
  std::optional<int> threshold;  // fixed binarization threshold; Otsu when unset
  double tvd_weight = 0.8;
  int tvd_iters = 100;
  int iterations = 25;
  double derivative_guard_eps = 1e-6;
  bool clamp_negative_gd = true;
  double shading_contrast = 0.2;  // relief height of g_hn = 1, as a fraction of the image extent
  double shading_floor = 1e-3;
  double alpha = 15.0;
  double radius_mm = 20.0;
  std::optional<double> pixel_pitch_mm;  // radius_mm / mask radius when unset
  std::optional<CircularMask> mask;      // estimated from g0 when unset
  double smoothing_radius_mm = 1.0;
  int threads = 0;  // 0: TACSHADE_THREADS or the OpenMP default

  bool operator==(const PipelineConfig&) const = default;
};

void validate_config(const PipelineConfig& cfg);

/// `key = value` lines; '#' starts a comment. Unknown keys and bad values are Parse errors.
/// Keys: window (N or WxH), stride, threshold (N or auto), tvd_weight, tvd_iters,
/// iterations, guard_eps, clamp_gd, shading_contrast, shading_floor, alpha,
/// radius_mm, pixel_pitch_mm (F or auto), mask (cx,cy,r or auto),
/// smoothing_radius_mm, threads.
PipelineConfig parse_config(const std::string& text, PipelineConfig base = {});

std::string serialize_config(const PipelineConfig& cfg);

PipelineConfig read_config(const std::filesystem::path& path);

}  // namespace tacshade
