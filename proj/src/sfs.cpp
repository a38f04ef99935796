#include "tacshade/sfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kernels.hpp"

namespace tacshade {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite_range(const GreyscaleField& g, double lo, double hi, const char* what) {
  for (double v : g.values()) {
    if (!(v >= lo && v <= hi)) {
      throw Error(ErrorKind::Domain, std::string(what) + ": value " + std::to_string(v) + " outside [" +
                                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }
}

// Half-pixel backward box mean so the upwind solver lines up with the
// backward-difference forward model.
Grid<double> aligned_shading(const GreyscaleField& e, double floor) {
  Grid<double> out(e.width(), e.height());
  for (int y = 0; y < e.height(); ++y) {
    const int ym = std::max(y - 1, 0);
    for (int x = 0; x < e.width(); ++x) {
      const int xm = std::max(x - 1, 0);
      const double mean = 0.25 * (e(x, y) + e(xm, y) + e(x, ym) + e(xm, ym));
      out(x, y) = std::clamp(mean, floor, 1.0);
    }
  }
  return out;
}

}  // namespace

SensorGeometry make_geometry(const CircularMask& mask, double radius_mm, double alpha,
                             std::optional<double> pixel_pitch_mm) {
  SensorGeometry geom;
  geom.mask = mask;
  geom.radius_mm = radius_mm;
  geom.alpha = alpha;
  geom.pixel_pitch_mm = pixel_pitch_mm ? *pixel_pitch_mm : (mask.radius > 0.0 ? radius_mm / mask.radius : 0.0);
  validate_geometry(geom);
  return geom;
}

void validate_geometry(const SensorGeometry& geom) {
  if (!(geom.radius_mm > 0.0)) throw Error(ErrorKind::Domain, "sensor radius must be positive");
  if (!(geom.pixel_pitch_mm > 0.0)) throw Error(ErrorKind::Domain, "pixel pitch must be positive");
  if (!(geom.alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha must be positive");
  if (geom.camera_p != 0.0 || geom.camera_q != 0.0) {
    throw Error(ErrorKind::Domain, "camera axis must be (0, 0, -1)");
  }
  if (!(geom.mask.radius > 0.0)) throw Error(ErrorKind::InvalidMask, "mask radius must be positive");
}

GreyscaleField delta_greyscale(const GreyscaleField& g, const GreyscaleField& g0, bool clamp) {
  require_same_shape(g, g0, "delta_greyscale");
  GreyscaleField out(g.width(), g.height());
  out.range = clamp ? g.range : ValueRange::Unbounded;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.values()[i] - g0.values()[i];
    out.values()[i] = clamp ? std::max(d, 0.0) : d;
  }
  return out;
}

GreyscaleField shape_weighted_greyscale(const GreyscaleField& g_dn, const GreyscaleField& g0) {
  require_same_shape(g_dn, g0, "shape_weighted_greyscale");
  require_finite_range(g_dn, 0.0, 1.0, "shape_weighted_greyscale");
  GreyscaleField out(g_dn.width(), g_dn.height());
  out.range = g0.range;
  for (std::size_t i = 0; i < g_dn.size(); ++i) out.values()[i] = g_dn.values()[i] * g0.values()[i];
  return out;
}

GreyscaleField normalize(const GreyscaleField& g) {
  if (g.empty()) throw Error(ErrorKind::EmptyInput, "normalize: empty field");
  const auto [lo_it, hi_it] = std::minmax_element(g.values().begin(), g.values().end());
  const double lo = *lo_it;
  const double span = *hi_it - lo;
  GreyscaleField out(g.width(), g.height());
  out.range = ValueRange::Normalized;
  if (!(span > 0.0)) return out;
  for (std::size_t i = 0; i < g.size(); ++i) out.values()[i] = (g.values()[i] - lo) / span;
  return out;
}

GradientField backward_gradients(const Grid<double>& h) {
  GradientField grad{Grid<double>(h.width(), h.height()), Grid<double>(h.width(), h.height())};
  for (int y = 0; y < h.height(); ++y) {
    for (int x = 0; x < h.width(); ++x) {
      grad.p(x, y) = kernels::backward_p(h, x, y);
      grad.q(x, y) = kernels::backward_q(h, x, y);
    }
  }
  return grad;
}

GreyscaleField lambertian_render(const HeightField& h, const LambertianModel& model) {
  const double gain = model.intensity * model.reflectance;
  if (!(gain > 0.0)) throw Error(ErrorKind::Domain, "lambertian_render: I * rho must be positive");
  GreyscaleField out(h.width(), h.height());
  out.range = ValueRange::Normalized;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h.height(); ++y) {
    for (int x = 0; x < h.width(); ++x) {
      out(x, y) = kernels::lambert(kernels::backward_p(h, x, y), kernels::backward_q(h, x, y), model.light_p,
                                   model.light_q, gain);
    }
  }
  return out;
}

double newton_derivative(double p, double q, double pc, double qc) {
  const double n2 = p * p + q * q + 1.0;
  const double l = std::sqrt(pc * pc + qc * qc + 1.0);
  return (p + q) * (p * pc + q * qc + 1.0) / (std::sqrt(n2 * n2 * n2) * l) - (pc + qc) / (std::sqrt(n2) * l);
}

double upwind_newton_height(double a, double b, double shading, double guard_eps) {
  const double lo0 = std::min(a, b);
  if (shading >= 1.0) return lo0;
  const double slope = std::sqrt(1.0 / (shading * shading) - 1.0);

  // f(lo) = shading - 1 < 0 and f(lo + slope) >= 0.
  double lo = lo0;
  double hi = lo0 + slope;
  double h = hi;
  for (int k = 0; k < 64; ++k) {
    const double p = std::max(h - a, 0.0);
    const double q = std::max(h - b, 0.0);
    const double f = shading - 1.0 / std::sqrt(1.0 + p * p + q * q);
    if (f == 0.0) return h;
    if (f > 0.0) {
      hi = h;
    } else {
      lo = h;
    }
    const double df = newton_derivative(p, q);
    double next = 0.5 * (lo + hi);
    if (std::abs(df) >= guard_eps) {
      const double step = h - f / df;
      if (step > lo && step < hi) next = step;
    }
    if (std::abs(next - h) <= 1e-12 * std::max(1.0, std::abs(h)) || hi - lo <= 1e-14 * std::max(1.0, std::abs(hi))) {
      return next;
    }
    h = next;
  }
  return h;
}

HeightField hybrid_sfs(const GreyscaleField& shading, const ReconstructionConfig& cfg) {
  if (cfg.iterations < 1) throw Error(ErrorKind::Domain, "hybrid_sfs: iterations must be >= 1");
  if (!(cfg.derivative_guard_eps > 0.0)) throw Error(ErrorKind::Domain, "hybrid_sfs: guard eps must be > 0");
  if (!(cfg.shading_floor > 0.0 && cfg.shading_floor <= 1.0)) {
    throw Error(ErrorKind::Domain, "hybrid_sfs: shading floor must be in (0, 1]");
  }
  require_finite_range(shading, 0.0, 1.0, "hybrid_sfs");

  const int w = shading.width();
  const int hgt = shading.height();
  const Grid<double> e = aligned_shading(shading, cfg.shading_floor);
  Grid<double> h(w, hgt, kInf);

  auto at = [&](int x, int y) { return h.contains(x, y) ? h(x, y) : 0.0; };
  auto visit = [&](int x, int y) -> bool {
    const double a = std::min(at(x - 1, y), at(x + 1, y));
    const double b = std::min(at(x, y - 1), at(x, y + 1));
    if (a == kInf && b == kInf) return false;
    const double candidate = upwind_newton_height(a, b, e(x, y), cfg.derivative_guard_eps);
    if (candidate < h(x, y)) {
      h(x, y) = candidate;
      return true;
    }
    return false;
  };

  int quiet_sweeps = 0;
  for (int n = 0; n < cfg.iterations && quiet_sweeps < 4; ++n) {
    const bool x_forward = (n % 2) == 0;
    const bool y_forward = (n % 4) < 2;
    bool changed = false;
    for (int j = 0; j < hgt; ++j) {
      const int y = y_forward ? j : hgt - 1 - j;
      for (int i = 0; i < w; ++i) {
        const int x = x_forward ? i : w - 1 - i;
        changed = visit(x, y) || changed;
      }
    }
    quiet_sweeps = changed ? 0 : quiet_sweeps + 1;
  }

  HeightField out(w, hgt);
  out.values() = std::move(h.values());
  return out;
}

HeightField scale_height(const HeightField& h, const SensorGeometry& geom) {
  if (!(geom.alpha > 0.0)) throw Error(ErrorKind::Domain, "scale_height: alpha must be positive");
  HeightField out(h.width(), h.height());
  for (std::size_t i = 0; i < h.size(); ++i) {
    out.values()[i] = std::clamp(geom.alpha * h.values()[i], 0.0, geom.radius_mm);
  }
  return out;
}

LiftResult lift_to_hemisphere(const HeightField& h, const SensorGeometry& geom) {
  validate_geometry(geom);
  LiftResult result;
  result.cloud.frame = "sensor";
  const double r = geom.radius_mm;
  for (int v = 0; v < h.height(); ++v) {
    for (int u = 0; u < h.width(); ++u) {
      if (!geom.mask.contains(u, v)) continue;
      ++result.in_mask;
      const double x = geom.pixel_pitch_mm * (u - geom.mask.center_x);
      const double y = geom.pixel_pitch_mm * (v - geom.mask.center_y);
      const double depth = h(u, v);
      const double rr = (r - depth) * (r - depth);
      const double d2 = x * x + y * y;
      if (rr < d2 && d2 - rr > 1e-12 * r * r) {
        ++result.skipped;
        continue;
      }
      result.cloud.points.push_back({x, y, std::sqrt(std::max(rr - d2, 0.0))});
      result.depths.push_back(depth);
      result.pixel_index.push_back(v * h.width() + u);
    }
  }
  return result;
}

}  // namespace tacshade
