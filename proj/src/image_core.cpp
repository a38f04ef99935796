#include "tacshade/image_core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "kernels.hpp"

namespace tacshade {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidMask: return "invalid-mask";
    case ErrorKind::InvalidWindow: return "invalid-window";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::EmptyInput: return "empty-input";
    case ErrorKind::DegenerateCluster: return "degenerate-cluster";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void validate_mask(const CircularMask& mask, int width, int height) {
  if (!(mask.radius > 0.0) || !std::isfinite(mask.radius)) {
    throw Error(ErrorKind::InvalidMask, "mask radius must be positive");
  }
  if (!(mask.center_x >= 0.0 && mask.center_x < width && mask.center_y >= 0.0 && mask.center_y < height)) {
    throw Error(ErrorKind::InvalidMask, "mask centre (" + std::to_string(mask.center_x) + ", " +
                                            std::to_string(mask.center_y) + ") lies outside the image");
  }
}

RasterImage to_raster(const BinaryImage& b) {
  RasterImage out(b.width(), b.height());
  std::transform(b.values().begin(), b.values().end(), out.values().begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
  return out;
}

RasterImage apply_circular_mask(const RasterImage& img, const CircularMask& mask) {
  validate_mask(mask, img.width(), img.height());
  RasterImage out = img;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (!mask.contains(x, y)) out(x, y) = 0;
    }
  }
  return out;
}

CircularMask estimate_mask(const RasterImage& img) {
  double sx = 0.0, sy = 0.0;
  std::size_t count = 0;
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img(x, y) != 0) {
        sx += x;
        sy += y;
        ++count;
      }
    }
  }
  if (count == 0) throw Error(ErrorKind::EmptyInput, "cannot estimate a mask from an all-black image");
  CircularMask mask;
  mask.center_x = sx / static_cast<double>(count);
  mask.center_y = sy / static_cast<double>(count);
  std::vector<double> dist;
  dist.reserve(count);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (img(x, y) != 0) dist.push_back(std::hypot(x - mask.center_x, y - mask.center_y));
    }
  }
  const auto k = static_cast<std::size_t>(std::floor(0.99 * static_cast<double>(dist.size() - 1)));
  std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  mask.radius = std::max(dist[k], 0.5);
  return mask;
}

std::optional<int> otsu_threshold(const RasterImage& img) {
  std::array<double, 256> hist{};
  for (std::uint8_t v : img.values()) hist[v] += 1.0;
  const double total = static_cast<double>(img.size());
  double sum_all = 0.0;
  for (int i = 0; i < 256; ++i) sum_all += i * hist[static_cast<std::size_t>(i)];

  // Between-class variance for threshold t: classes [0, t) and [t, 255].
  std::array<double, 257> score{};
  double w0 = 0.0, sum0 = 0.0;
  double best = 0.0;
  for (int t = 1; t <= 255; ++t) {
    w0 += hist[static_cast<std::size_t>(t - 1)];
    sum0 += (t - 1) * hist[static_cast<std::size_t>(t - 1)];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    const double s = w0 * w1 * (m0 - m1) * (m0 - m1);
    score[static_cast<std::size_t>(t)] = s;
    best = std::max(best, s);
  }
  if (best <= 0.0) return std::nullopt;

  // Middle of the first run of maximal thresholds.
  const double tol = best * 1e-12;
  int first = -1, last = -1;
  for (int t = 1; t <= 255; ++t) {
    if (score[static_cast<std::size_t>(t)] >= best - tol) {
      if (first < 0) first = t;
      last = t;
    } else if (first >= 0) {
      break;
    }
  }
  return (first + last) / 2;
}

BinaryImage binarize(const RasterImage& img, std::optional<int> threshold) {
  BinaryImage out(img.width(), img.height());
  const std::optional<int> t = threshold ? threshold : otsu_threshold(img);
  if (!t) return out;
  const int thr = *t;
  std::transform(img.values().begin(), img.values().end(), out.values().begin(),
                 [thr](std::uint8_t v) { return static_cast<std::uint8_t>(v >= thr ? 1 : 0); });
  return out;
}

void validate_window(const Window& window, int stride) {
  if (window.width < 1 || window.height < 1 || window.width % 2 == 0 || window.height % 2 == 0) {
    throw Error(ErrorKind::InvalidWindow, "window dimensions must be odd and >= 1 (got " +
                                              std::to_string(window.width) + "x" +
                                              std::to_string(window.height) + ")");
  }
  if (stride < 1) throw Error(ErrorKind::InvalidWindow, "stride must be >= 1");
}

GreyscaleField ratio_convolution(const BinaryImage& b, Window window, int stride) {
  validate_window(window, stride);
  const int half_w = window.width / 2;
  const int half_h = window.height / 2;

  kernels::IntegralImage ii = kernels::make_integral_storage(b);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < b.height(); ++y) kernels::integral_row(b, ii, y);
#pragma omp parallel for schedule(static)
  for (int x = 1; x <= b.width(); ++x) kernels::integral_column(ii, x);

  GreyscaleField out(b.width(), b.height());
  out.range = ValueRange::Raw;
  if (stride == 1) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < b.height(); ++y) {
      for (int x = 0; x < b.width(); ++x) out(x, y) = kernels::window_ratio(ii, x, y, half_w, half_h);
    }
    return out;
  }

  const int cw = (b.width() + stride - 1) / stride;
  const int ch = (b.height() + stride - 1) / stride;
  Grid<double> coarse(cw, ch);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ch; ++j) {
    for (int i = 0; i < cw; ++i) coarse(i, j) = kernels::window_ratio(ii, i * stride, j * stride, half_w, half_h);
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < b.height(); ++y) {
    for (int x = 0; x < b.width(); ++x) out(x, y) = kernels::upsample_at(coarse, x, y, stride);
  }
  return out;
}

double tv_objective(const Grid<double>& reference, const Grid<double>& x, double weight) {
  require_same_shape(reference, x, "tv_objective");
  double fidelity = 0.0;
  double tv = 0.0;
  for (int v = 0; v < x.height(); ++v) {
    for (int u = 0; u < x.width(); ++u) {
      const double d = x(u, v) - reference(u, v);
      fidelity += d * d;
      if (u + 1 < x.width()) tv += std::abs(x(u + 1, v) - x(u, v));
      if (v + 1 < x.height()) tv += std::abs(x(u, v + 1) - x(u, v));
    }
  }
  return fidelity + weight * tv;
}

GreyscaleField tvd_denoise(const GreyscaleField& g, double weight, int max_iters) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw Error(ErrorKind::Domain, "TVD weight must be >= 0");
  if (max_iters < 1) throw Error(ErrorKind::Domain, "TVD max_iters must be >= 1");
  if (weight == 0.0) return g;

  kernels::TvState s = kernels::tv_init(g);
  double tau = kernels::kTvTau0;
  double sigma = 1.0 / (8.0 * tau);
  for (int it = 0; it < max_iters; ++it) {
#pragma omp parallel for schedule(static)
    for (int y = 0; y < g.height(); ++y) kernels::tv_dual_row(s, sigma, weight, y);
    const double theta = 1.0 / std::sqrt(1.0 + 4.0 * tau);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < g.height(); ++y) kernels::tv_primal_row(g, s, tau, theta, y);
    tau *= theta;
    sigma /= theta;
  }
  const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < g.height(); ++y) kernels::tv_clamp_row(s.x, *lo, *hi, y);

  if (tv_objective(g, s.x, weight) > tv_objective(g, g, weight)) return g;
  return GreyscaleField(std::move(s.x), g.range);
}

}  // namespace tacshade
