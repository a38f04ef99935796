#pragma once

#include <optional>

#include "tacshade/image.hpp"

namespace tacshade {

RasterImage apply_circular_mask(const RasterImage& img, const CircularMask& mask);

/// Centroid of the nonzero pixels and the 99th percentile of their distances to it.
/// Throws EmptyInput when the image is all black.
CircularMask estimate_mask(const RasterImage& img);

/// Threshold maximizing between-class variance over the 256-bin histogram.
/// Classes are [0, t) and [t, 255]. When several thresholds tie, the middle
/// of the tied run is returned. nullopt for a constant image.
std::optional<int> otsu_threshold(const RasterImage& img);

/// pixel >= threshold -> 1. With no threshold the Otsu threshold is used; a
/// constant image then binarizes to all zeros.
BinaryImage binarize(const RasterImage& img, std::optional<int> threshold = std::nullopt);

struct Window {
  int width = 21;   // m, along u
  int height = 21;  // n, along v

  bool operator==(const Window&) const = default;
};

void validate_window(const Window& window, int stride);

/// White-pixel ratio 255 * s_w / s_t over a window centred on each pixel.
/// The window is clipped at the image border, so s_t shrinks there. With
/// stride k > 1 the ratio is sampled every k pixels and bilinearly
/// upsampled back to the source size. Window sums come from an integral image.
GreyscaleField ratio_convolution(const BinaryImage& b, Window window = {}, int stride = 1);

/// Sum of squared deviation from `reference` plus weight times the anisotropic
/// total variation (|horizontal| + |vertical| forward differences) of `x`.
double tv_objective(const Grid<double>& reference, const Grid<double>& x, double weight);

/// Anisotropic TV denoising: accelerated primal-dual iterations, then a clamp
/// to [min(g), max(g)]. The result never has a larger tv_objective than g.
GreyscaleField tvd_denoise(const GreyscaleField& g, double weight = 0.8, int max_iters = 100);

}  // namespace tacshade
