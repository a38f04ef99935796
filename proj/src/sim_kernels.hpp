#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "tacshade/simulator.hpp"

namespace tacshade::sim {

struct PinDisc {
  double x;
  double y;
  double radius;
};

inline std::vector<PinDisc> pin_discs(const PinLattice& lattice, const HeightField& h, const ExposureModel& exposure) {
  std::vector<PinDisc> discs;
  if (!(lattice.pin_radius_px > 0.0)) return discs;
  for (const PinSite& s : pin_sites(lattice)) {
    const int u = std::clamp(static_cast<int>(std::lround(s.x)), 0, lattice.width - 1);
    const int v = std::clamp(static_cast<int>(std::lround(s.y)), 0, lattice.height - 1);
    const double radius = lattice.pin_radius_px * pin_scale(h(u, v), exposure);
    if (radius > 0.0) discs.push_back({s.x, s.y, radius});
  }
  return discs;
}

inline void render_row(const PinLattice& lattice, const std::vector<PinDisc>& discs, RasterImage& img, int y) {
  const std::uint8_t background = lattice.marker_background ? 255 : 0;
  const std::uint8_t pin = lattice.marker_background ? 0 : 255;
  for (int x = 0; x < lattice.width; ++x) img(x, y) = lattice.field.contains(x, y) ? background : 0;
  for (const PinDisc& d : discs) {
    const double dy = y - d.y;
    if (std::abs(dy) > d.radius) continue;
    const double half = std::sqrt(d.radius * d.radius - dy * dy);
    const int x0 = std::max(0, static_cast<int>(std::ceil(d.x - half)));
    const int x1 = std::min(lattice.width - 1, static_cast<int>(std::floor(d.x + half)));
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - d.x;
      if (dx * dx + dy * dy <= d.radius * d.radius && lattice.field.contains(x, y)) img(x, y) = pin;
    }
  }
}

inline void add_noise(const PinLattice& lattice, const ExposureModel& exposure, RasterImage& img) {
  if (!(exposure.noise_stddev > 0.0)) return;
  std::mt19937_64 rng(exposure.seed);
  std::normal_distribution<double> noise(0.0, exposure.noise_stddev);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!lattice.field.contains(x, y)) continue;
      const double v = img(x, y) + noise(rng);
      img(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
}

}  // namespace tacshade::sim
