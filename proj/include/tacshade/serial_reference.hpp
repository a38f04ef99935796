#pragma once

// Single-threaded versions of the OpenMP kernels. They run the same per-pixel
// code in plain loops and must produce bit-identical results.

#include "tacshade/image_core.hpp"
#include "tacshade/sfs.hpp"
#include "tacshade/simulator.hpp"

namespace tacshade::serial {

GreyscaleField ratio_convolution(const BinaryImage& b, Window window = {}, int stride = 1);

GreyscaleField tvd_denoise(const GreyscaleField& g, double weight = 0.8, int max_iters = 100);

GreyscaleField lambertian_render(const HeightField& h, const LambertianModel& model = {});

RasterImage render_pins(const PinLattice& lattice, const HeightField& h, const ExposureModel& exposure);

}  // namespace tacshade::serial
