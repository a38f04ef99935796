#include "tacshade/serial_reference.hpp"

#include "kernels.hpp"
#include "sim_kernels.hpp"

namespace tacshade::serial {

GreyscaleField ratio_convolution(const BinaryImage& b, Window window, int stride) {
  validate_window(window, stride);
  const int half_w = window.width / 2;
  const int half_h = window.height / 2;

  kernels::IntegralImage ii = kernels::make_integral_storage(b);
  for (int y = 0; y < b.height(); ++y) kernels::integral_row(b, ii, y);
  for (int x = 1; x <= b.width(); ++x) kernels::integral_column(ii, x);

  GreyscaleField out(b.width(), b.height());
  out.range = ValueRange::Raw;
  if (stride == 1) {
    for (int y = 0; y < b.height(); ++y) {
      for (int x = 0; x < b.width(); ++x) out(x, y) = kernels::window_ratio(ii, x, y, half_w, half_h);
    }
    return out;
  }
  Grid<double> coarse((b.width() + stride - 1) / stride, (b.height() + stride - 1) / stride);
  for (int j = 0; j < coarse.height(); ++j) {
    for (int i = 0; i < coarse.width(); ++i) coarse(i, j) = kernels::window_ratio(ii, i * stride, j * stride, half_w, half_h);
  }
  for (int y = 0; y < b.height(); ++y) {
    for (int x = 0; x < b.width(); ++x) out(x, y) = kernels::upsample_at(coarse, x, y, stride);
  }
  return out;
}

GreyscaleField tvd_denoise(const GreyscaleField& g, double weight, int max_iters) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw Error(ErrorKind::Domain, "TVD weight must be >= 0");
  if (max_iters < 1) throw Error(ErrorKind::Domain, "TVD max_iters must be >= 1");
  if (weight == 0.0) return g;
  kernels::TvState s = kernels::tv_init(g);
  double tau = kernels::kTvTau0;
  double sigma = 1.0 / (8.0 * tau);
  for (int it = 0; it < max_iters; ++it) {
    for (int y = 0; y < g.height(); ++y) kernels::tv_dual_row(s, sigma, weight, y);
    const double theta = 1.0 / std::sqrt(1.0 + 4.0 * tau);
    for (int y = 0; y < g.height(); ++y) kernels::tv_primal_row(g, s, tau, theta, y);
    tau *= theta;
    sigma /= theta;
  }
  const auto [lo, hi] = std::minmax_element(g.values().begin(), g.values().end());
  for (int y = 0; y < g.height(); ++y) kernels::tv_clamp_row(s.x, *lo, *hi, y);
  if (tv_objective(g, s.x, weight) > tv_objective(g, g, weight)) return g;
  return GreyscaleField(std::move(s.x), g.range);
}

GreyscaleField lambertian_render(const HeightField& h, const LambertianModel& model) {
  const double gain = model.intensity * model.reflectance;
  if (!(gain > 0.0)) throw Error(ErrorKind::Domain, "lambertian_render: I * rho must be positive");
  GreyscaleField out(h.width(), h.height());
  out.range = ValueRange::Normalized;
  for (int y = 0; y < h.height(); ++y) {
    for (int x = 0; x < h.width(); ++x) {
      out(x, y) = kernels::lambert(kernels::backward_p(h, x, y), kernels::backward_q(h, x, y), model.light_p,
                                   model.light_q, gain);
    }
  }
  return out;
}

RasterImage render_pins(const PinLattice& lattice, const HeightField& h, const ExposureModel& exposure) {
  validate_lattice(lattice);
  validate_exposure(exposure);
  if (h.width() != lattice.width || h.height() != lattice.height) {
    throw Error(ErrorKind::Shape, "render_pins: height field does not match the lattice image size");
  }
  const auto discs = sim::pin_discs(lattice, h, exposure);
  RasterImage img(lattice.width, lattice.height);
  for (int y = 0; y < lattice.height; ++y) sim::render_row(lattice, discs, img, y);
  sim::add_noise(lattice, exposure, img);
  return img;
}

}  // namespace tacshade::serial
