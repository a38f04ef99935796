#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tacshade/geometry.hpp"
#include "tacshade/image.hpp"

namespace tacshade {

/// Hemisphere and camera description. The camera looks straight down the
/// sensor axis, L = (p_c, q_c, -1) with p_c = q_c = 0.
struct SensorGeometry {
  double radius_mm = 20.0;
  double pixel_pitch_mm = 0.0;  // mm per pixel
  CircularMask mask;
  double alpha = 15.0;
  double camera_p = 0.0;
  double camera_q = 0.0;
};

/// Builds a geometry whose pixel pitch defaults to radius_mm / mask.radius
/// (the mask edge maps onto the hemisphere equator).
SensorGeometry make_geometry(const CircularMask& mask, double radius_mm, double alpha,
                             std::optional<double> pixel_pitch_mm = std::nullopt);

void validate_geometry(const SensorGeometry& geom);

/// Reflectance model used by the forward renderer: I * rho * cos(N, L).
struct LambertianModel {
  double intensity = 1.0;
  double reflectance = 1.0;
  double light_p = 0.0;
  double light_q = 0.0;
};

struct ReconstructionConfig {
  int iterations = 25;
  double derivative_guard_eps = 1e-6;
  bool clamp_negative_gd = true;
  /// Lower bound on the shading seen by the solver; bounds the slope at 1/floor.
  double shading_floor = 1e-3;
};

GreyscaleField delta_greyscale(const GreyscaleField& g, const GreyscaleField& g0, bool clamp);

GreyscaleField shape_weighted_greyscale(const GreyscaleField& g_dn, const GreyscaleField& g0);

/// Min-max rescale to [0, 1]; a constant field maps to zeros.
GreyscaleField normalize(const GreyscaleField& g);

/// p(u,v) = h(u,v) - h(u-1,v), q(u,v) = h(u,v) - h(u,v-1), zero outside the grid.
GradientField backward_gradients(const Grid<double>& h);

/// Per-pixel I*rho*(p*lp + q*lq + 1) / (|N| |L|) with backward-difference gradients.
GreyscaleField lambertian_render(const HeightField& h, const LambertianModel& model = {});

/// d f / d h for f = g - R'(p, q), with dp/dh = dq/dh = 1:
///   (p+q)(p p_c + q q_c + 1) / ((p^2+q^2+1)^{3/2} |L|) - (p_c + q_c) / (|N| |L|)
double newton_derivative(double p, double q, double pc = 0.0, double qc = 0.0);

/// Height at one pixel that makes the upwind shading equal `shading`, given the
/// smaller horizontal neighbour `a` and smaller vertical neighbour `b`. Solved by
/// Newton steps h <- h - f / f' using newton_derivative, safeguarded by a bracket.
double upwind_newton_height(double a, double b, double shading, double guard_eps);

/// Height from a normalized shading image (1 = facing the camera). Heights are
/// anchored at zero outside the image and swept in four alternating orders,
/// one per iteration; each visit applies upwind_newton_height and keeps the
/// smaller value. Output is in pixel units.
HeightField hybrid_sfs(const GreyscaleField& shading, const ReconstructionConfig& cfg = {});

/// alpha * h clipped to [0, radius_mm].
HeightField scale_height(const HeightField& h, const SensorGeometry& geom);

struct LiftResult {
  PointCloud cloud;
  std::vector<double> depths;    // h of each emitted point
  std::vector<int> pixel_index;  // y * width + x of each emitted point
  std::size_t in_mask = 0;
  std::size_t skipped = 0;       // in-mask pixels with (r-h)^2 < x^2 + y^2
};

/// Maps in-mask pixels to (x, y, sqrt((r-h)^2 - x^2 - y^2)) in the sensor frame.
LiftResult lift_to_hemisphere(const HeightField& h, const SensorGeometry& geom);

}  // namespace tacshade
