#pragma once

// Per-pixel building blocks shared by the OpenMP kernels and the serial
// reference implementations. Both paths must call exactly these functions so
// that their outputs stay bit-identical.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "tacshade/image.hpp"

namespace tacshade::kernels {

/// (W+1)x(H+1) summed-area table of a binary image.
struct IntegralImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint32_t> sums;

  std::uint32_t at(int x, int y) const noexcept {
    return sums[static_cast<std::size_t>(y) * static_cast<std::size_t>(width + 1) + static_cast<std::size_t>(x)];
  }

  // Count of ones in [x0, x1) x [y0, y1).
  std::uint32_t box(int x0, int y0, int x1, int y1) const noexcept {
    return at(x1, y1) + at(x0, y0) - at(x0, y1) - at(x1, y0);
  }
};

inline void integral_row(const BinaryImage& b, IntegralImage& ii, int y) {
  const std::size_t stride = static_cast<std::size_t>(b.width() + 1);
  std::uint32_t* out = ii.sums.data() + static_cast<std::size_t>(y + 1) * stride;
  out[0] = 0;
  std::uint32_t acc = 0;
  const auto src = b.row(y);
  for (int x = 0; x < b.width(); ++x) {
    acc += src[static_cast<std::size_t>(x)];
    out[x + 1] = acc;
  }
}

inline void integral_column(IntegralImage& ii, int x) {
  const std::size_t stride = static_cast<std::size_t>(ii.width + 1);
  for (int y = 1; y <= ii.height; ++y) {
    ii.sums[static_cast<std::size_t>(y) * stride + static_cast<std::size_t>(x)] +=
        ii.sums[static_cast<std::size_t>(y - 1) * stride + static_cast<std::size_t>(x)];
  }
}

inline IntegralImage make_integral_storage(const BinaryImage& b) {
  IntegralImage ii;
  ii.width = b.width();
  ii.height = b.height();
  ii.sums.assign(static_cast<std::size_t>(b.width() + 1) * static_cast<std::size_t>(b.height() + 1), 0);
  return ii;
}

inline double window_ratio(const IntegralImage& ii, int x, int y, int half_w, int half_h) {
  const int x0 = std::max(0, x - half_w);
  const int x1 = std::min(ii.width, x + half_w + 1);
  const int y0 = std::max(0, y - half_h);
  const int y1 = std::min(ii.height, y + half_h + 1);
  const std::uint32_t white = ii.box(x0, y0, x1, y1);
  const std::uint32_t total = static_cast<std::uint32_t>((x1 - x0) * (y1 - y0));
  return 255.0 * static_cast<double>(white) / static_cast<double>(total);
}

/// Bilinear sample of a coarse grid laid out every `stride` source pixels.
inline double upsample_at(const Grid<double>& coarse, int x, int y, int stride) {
  const double sx = static_cast<double>(x) / stride;
  const double sy = static_cast<double>(y) / stride;
  const int x0 = std::min(static_cast<int>(sx), coarse.width() - 1);
  const int y0 = std::min(static_cast<int>(sy), coarse.height() - 1);
  const int x1 = std::min(x0 + 1, coarse.width() - 1);
  const int y1 = std::min(y0 + 1, coarse.height() - 1);
  const double tx = std::clamp(sx - x0, 0.0, 1.0);
  const double ty = std::clamp(sy - y0, 0.0, 1.0);
  const double top = coarse(x0, y0) + (coarse(x1, y0) - coarse(x0, y0)) * tx;
  const double bottom = coarse(x0, y1) + (coarse(x1, y1) - coarse(x0, y1)) * tx;
  return top + (bottom - top) * ty;
}

// ---------------------------------------------------------------------------
// TV denoising (accelerated primal-dual on forward differences)

inline constexpr double kTvTau0 = 0.25;

struct TvState {
  Grid<double> x;
  Grid<double> x_bar;
  Grid<double> px;  // dual of the horizontal differences, |px| <= w
  Grid<double> py;  // dual of the vertical differences, |py| <= w
};

inline TvState tv_init(const Grid<double>& g) {
  return {g, g, Grid<double>(g.width(), g.height()), Grid<double>(g.width(), g.height())};
}

inline void tv_dual_row(TvState& s, double sigma, double w, int y) {
  const int width = s.x.width();
  const int height = s.x.height();
  for (int u = 0; u < width; ++u) {
    const double dx = u + 1 < width ? s.x_bar(u + 1, y) - s.x_bar(u, y) : 0.0;
    const double dy = y + 1 < height ? s.x_bar(u, y + 1) - s.x_bar(u, y) : 0.0;
    s.px(u, y) = std::clamp(s.px(u, y) + sigma * dx, -w, w);
    s.py(u, y) = std::clamp(s.py(u, y) + sigma * dy, -w, w);
  }
}

inline void tv_primal_row(const Grid<double>& g, TvState& s, double tau, double theta, int y) {
  const int width = s.x.width();
  const int height = s.x.height();
  for (int u = 0; u < width; ++u) {
    // Negative adjoint of the forward differences.
    double div = 0.0;
    if (u + 1 < width) div += s.px(u, y);
    if (u > 0) div -= s.px(u - 1, y);
    if (y + 1 < height) div += s.py(u, y);
    if (y > 0) div -= s.py(u, y - 1);
    const double old = s.x(u, y);
    const double next = (old + tau * div + 2.0 * tau * g(u, y)) / (1.0 + 2.0 * tau);
    s.x(u, y) = next;
    s.x_bar(u, y) = next + theta * (next - old);
  }
}

inline void tv_clamp_row(Grid<double>& x, double lo, double hi, int y) {
  for (int u = 0; u < x.width(); ++u) x(u, y) = std::clamp(x(u, y), lo, hi);
}

// ---------------------------------------------------------------------------
// Shading

/// Cosine between N = (p, q, -1) and L = (lp, lq, -1), scaled by I*rho and clamped at 0.
inline double lambert(double p, double q, double lp, double lq, double gain) {
  const double num = p * lp + q * lq + 1.0;
  const double den = std::sqrt(p * p + q * q + 1.0) * std::sqrt(lp * lp + lq * lq + 1.0);
  return gain * std::max(0.0, num / den);
}

inline double backward_p(const Grid<double>& h, int x, int y) {
  return h(x, y) - (x > 0 ? h(x - 1, y) : 0.0);
}

inline double backward_q(const Grid<double>& h, int x, int y) {
  return h(x, y) - (y > 0 ? h(x, y - 1) : 0.0);
}

}  // namespace tacshade::kernels
