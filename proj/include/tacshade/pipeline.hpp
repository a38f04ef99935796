#pragma once

#include "tacshade/config.hpp"
#include "tacshade/image.hpp"
#include "tacshade/sfs.hpp"

namespace tacshade {

/// Greyscale stages for a deformed frame and its rest frame g0.
struct GreyStages {
  CircularMask mask;
  int threshold = 256;  // binarization threshold applied to both frames
  BinaryImage binary;
  BinaryImage binary0;
  GreyscaleField g;     // ratio convolution scaled to [0, 1], then TVD
  GreyscaleField g0;    // same for the rest frame
  GreyscaleField g_d;   // g - g0, clamped at 0 unless disabled
  GreyscaleField g_dn;  // normalized g_d
  GreyscaleField g_h;   // g_dn * g0
  GreyscaleField g_hn;  // normalized g_h
};

/// Both frames must have the same size (Shape error otherwise). The mask is
/// cfg.mask or estimated from g0; the threshold is cfg.threshold or the Otsu
/// threshold of the masked g0 (256 when g0 is constant).
GreyStages greyscale_stages(const RasterImage& frame, const RasterImage& g0, const PipelineConfig& cfg);

struct Reconstruction {
  GreyStages grey;
  GreyscaleField shading;  // Lambertian image of the relief shading_contrast * max(W, H) * g_hn
  HeightField height_px;   // solver output
  HeightField height_mm;   // alpha * height_px / max(width, height), clipped to [0, radius]
  SensorGeometry geometry;
  LiftResult lift;
  double max_depth_mm = 0.0;
  double wall_ms = 0.0;
};

Reconstruction reconstruct(const RasterImage& frame, const RasterImage& g0, const PipelineConfig& cfg);

struct ContactCloud {
  PointCloud cloud;
  std::vector<double> depths;
};

/// Contact cluster of a reconstruction; with no deformation at all the whole cloud.
ContactCloud contact_cloud(const Reconstruction& rec);

}  // namespace tacshade
