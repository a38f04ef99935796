#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tacshade/image.hpp"

namespace tacshade {

/// Hexagonal lattice of black pins over a white marker layer, seen by an
/// orthographic camera looking down the sensor axis.
struct PinLattice {
  int width = 640;
  int height = 480;
  CircularMask field{320.0, 240.0, 230.0};
  double pitch_px = 28.0;
  double pin_radius_px = 9.0;
  bool marker_background = true;  // white base layer
};

void validate_lattice(const PinLattice& lattice);

struct PinSite {
  double x;
  double y;
};

/// Lattice sites whose centres fall inside the field, rows spaced
/// pitch*sqrt(3)/2 apart and odd rows offset by pitch/2, centred on the field.
std::vector<PinSite> pin_sites(const PinLattice& lattice);

/// How deformation shows up in the image: a pin at depth h is drawn with
/// radius pin_radius * (1 - kappa * min(h, saturation) / saturation).
struct ExposureModel {
  double kappa = 0.6;
  double saturation_depth_mm = 5.0;
  double skirt_sigma_px = 8.0;
  double noise_stddev = 0.0;  // grey levels; 0 disables noise
  std::uint64_t seed = 1;
};

void validate_exposure(const ExposureModel& exposure);

/// Hemisphere seen by the simulator: radius in mm, pixel pitch in mm/pixel.
struct SimGeometry {
  double radius_mm = 20.0;
  double pixel_pitch_mm = 20.0 / 230.0;
};

enum class PrimitiveKind { Sphere, Box, Cylinder, Crescent };

const char* to_string(PrimitiveKind kind) noexcept;
PrimitiveKind parse_primitive_kind(const std::string& name);

/// Rigid indenter pressed along the sensor axis.
/// dims: sphere {radius}; box {size_x, size_y}; cylinder {radius} (upright,
/// flat end down); crescent {outer radius, inner radius, inner offset}, the
/// inner disc cut out of the outer one along +x before the yaw.
struct ContactPrimitive {
  PrimitiveKind kind = PrimitiveKind::Sphere;
  std::array<double, 3> dims{6.0, 0.0, 0.0};
  double x_mm = 0.0;
  double y_mm = 0.0;
  double yaw_rad = 0.0;
  double indent_depth_mm = 2.0;
};

void validate_primitive(const ContactPrimitive& primitive, const SimGeometry& geom);

struct IndentResult {
  HeightField rigid;     // intersection depth before the skirt
  HeightField smoothed;  // after the Gaussian skirt
  double placement_mm = 0.0;  // z of the flat face, or z of the sphere centre
};

/// Rigid intersection depth of the primitive with the rest hemisphere along
/// each pixel's radial ray, placed so that its maximum equals the indent
/// depth, then blurred by a Gaussian skirt. Pixels outside the field stay 0.
IndentResult indent(const ContactPrimitive& primitive, const SimGeometry& geom, const PinLattice& lattice,
                    const ExposureModel& exposure);

HeightField indent_height(const ContactPrimitive& primitive, const SimGeometry& geom, const PinLattice& lattice,
                          const ExposureModel& exposure);

/// Pin-radius scale factor for a site at depth h.
double pin_scale(double depth_mm, const ExposureModel& exposure);

RasterImage render_rest_frame(const PinLattice& lattice);

struct SyntheticFrame {
  RasterImage image;
  HeightField truth_height;
  std::string meta_json;
};

RasterImage render_pins(const PinLattice& lattice, const HeightField& h, const ExposureModel& exposure);

SyntheticFrame render_deformed_frame(const PinLattice& lattice, const HeightField& h, const ExposureModel& exposure);

/// Full record of a simulated contact (primitive, lattice, exposure, geometry).
std::string frame_metadata(const ContactPrimitive& primitive, const PinLattice& lattice, const ExposureModel& exposure,
                           const SimGeometry& geom, double placement_mm);

/// Convenience: indent + render, metadata filled in.
SyntheticFrame simulate_contact(const ContactPrimitive& primitive, const PinLattice& lattice,
                                const ExposureModel& exposure, const SimGeometry& geom);

}  // namespace tacshade
