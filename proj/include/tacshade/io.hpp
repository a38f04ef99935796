#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tacshade/geometry.hpp"
#include "tacshade/image.hpp"

namespace tacshade {

// Images ---------------------------------------------------------------------

/// Binary PGM (P5, maxval 255).
RasterImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const RasterImage& img);
RasterImage decode_pgm(const std::string& bytes);
std::string encode_pgm(const RasterImage& img);

/// 8-bit greyscale PNG. Colour or 16-bit inputs are reduced to 8-bit grey on read.
RasterImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RasterImage& img);

/// Dispatches on the extension (.png, otherwise PGM).
RasterImage read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const RasterImage& img);

/// Linear map of a real field onto 0..255 (min -> 0, max -> 255; constant -> 0).
RasterImage to_display(const Grid<double>& field);

// Grids ----------------------------------------------------------------------
//
// 16-byte little-endian header: 4-byte magic, u32 width, u32 height,
// u32 value-range code; then width*height float32 samples, row-major.

inline constexpr char kGreyscaleMagic[5] = "TSGF";
inline constexpr char kHeightMagic[5] = "TSHF";

std::string encode_grid(const Grid<double>& grid, const char (&magic)[5], ValueRange range);

struct DecodedGrid {
  std::string magic;
  ValueRange range = ValueRange::Raw;
  Grid<double> grid;
};

DecodedGrid decode_grid(const std::string& bytes);

void write_greyscale(const std::filesystem::path& path, const GreyscaleField& g);
GreyscaleField read_greyscale(const std::filesystem::path& path);
void write_height(const std::filesystem::path& path, const HeightField& h);
HeightField read_height(const std::filesystem::path& path);

// Point clouds ---------------------------------------------------------------

/// ASCII PLY with `element vertex N` and float x, y, z properties.
std::string encode_ply(const PointCloud& cloud);
PointCloud decode_ply(const std::string& text);
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_ply(const std::filesystem::path& path);

/// CSV with header x_mm,y_mm,z_mm.
std::string encode_csv(const PointCloud& cloud);
PointCloud decode_csv(const std::string& text);
void write_csv(const std::filesystem::path& path, const PointCloud& cloud);
PointCloud read_csv(const std::filesystem::path& path);

/// Dispatches on the extension (.csv, otherwise PLY).
PointCloud read_cloud(const std::filesystem::path& path);
void write_cloud(const std::filesystem::path& path, const PointCloud& cloud);

// Stitch manifest ------------------------------------------------------------

struct ManifestRow {
  std::filesystem::path frame;
  std::filesystem::path g0;  // empty when the manifest has no g0 column
  RigidTransform pose;
  double contact_depth_mm = 0.0;
};

/// CSV, one row per contact:
///   frame[,g0],r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz,depth_mm
/// A first line starting with "frame" is a header. Relative paths resolve
/// against `base_dir`. Blank lines and lines starting with '#' are ignored.
std::vector<ManifestRow> parse_manifest(const std::string& text, const std::filesystem::path& base_dir);
std::vector<ManifestRow> read_manifest(const std::filesystem::path& path);
std::string encode_manifest(const std::vector<ManifestRow>& rows);

// Helpers --------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace tacshade
