#pragma once

#include <cstdint>

#include "tacshade/grid.hpp"

namespace tacshade {

/// 8-bit camera frame or intermediate image, values 0..255.
struct RasterImage : Grid<std::uint8_t> {
  using Grid::Grid;
};

/// Binarized frame: 1 marks a white marker pixel, 0 a pin or background pixel.
struct BinaryImage : Grid<std::uint8_t> {
  using Grid::Grid;
};

/// Declared bounds of a real-valued field. Codes are part of the grid file format.
enum class ValueRange : std::uint32_t {
  Raw = 0,         // [0, 255]
  Normalized = 1,  // [0, 1]
  Millimetres = 2,
  Unbounded = 3,
};

struct GreyscaleField : Grid<double> {
  using Grid::Grid;

  GreyscaleField(Grid<double> grid, ValueRange r) : Grid(std::move(grid)), range(r) {}

  ValueRange range = ValueRange::Raw;
};

/// Per-pixel deformation depth measured inward along the ray to the sphere centre.
/// Unscaled solver output is in pixel units; after scale_height it is in mm.
struct HeightField : Grid<double> {
  using Grid::Grid;
};

struct GradientField {
  Grid<double> p;  // dh/du
  Grid<double> q;  // dh/dv
};

struct CircularMask {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;

  bool contains(int x, int y) const noexcept {
    const double dx = x - center_x;
    const double dy = y - center_y;
    return dx * dx + dy * dy <= radius * radius;
  }

  bool operator==(const CircularMask&) const = default;
};

/// Throws InvalidMask when the centre lies outside the image or radius <= 0.
void validate_mask(const CircularMask& mask, int width, int height);

RasterImage to_raster(const BinaryImage& b);

}  // namespace tacshade
