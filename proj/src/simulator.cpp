#include "tacshade/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numbers>
#include <random>

#include "sim_kernels.hpp"

namespace tacshade {

namespace {

struct Footprint {
  const ContactPrimitive& prim;
  double cos_yaw;
  double sin_yaw;

  explicit Footprint(const ContactPrimitive& p) : prim(p), cos_yaw(std::cos(p.yaw_rad)), sin_yaw(std::sin(p.yaw_rad)) {}

  bool contains(double px, double py) const {
    const double dx = px - prim.x_mm;
    const double dy = py - prim.y_mm;
    const double lx = cos_yaw * dx + sin_yaw * dy;
    const double ly = -sin_yaw * dx + cos_yaw * dy;
    switch (prim.kind) {
      case PrimitiveKind::Box:
        return std::abs(lx) <= 0.5 * prim.dims[0] && std::abs(ly) <= 0.5 * prim.dims[1];
      case PrimitiveKind::Cylinder:
        return lx * lx + ly * ly <= prim.dims[0] * prim.dims[0];
      case PrimitiveKind::Crescent: {
        const double ox = lx - prim.dims[2];
        return lx * lx + ly * ly <= prim.dims[0] * prim.dims[0] && ox * ox + ly * ly > prim.dims[1] * prim.dims[1];
      }
      case PrimitiveKind::Sphere:
        return lx * lx + ly * ly <= prim.dims[0] * prim.dims[0];
    }
    return false;
  }
};

// Rigid depth along the inward ray through the rest point n * r (|n| = 1).
// `placement` is the z of the flat face, or the z of the sphere centre.
double ray_depth(const ContactPrimitive& prim, const Footprint& fp, double r, const double n[3], double placement) {
  if (prim.kind == PrimitiveKind::Sphere) {
    // Ball swept up the axis: sphere plus the cylinder above its centre. The
    // ray meets this convex body in one interval; its lower end is the exit.
    const double cx = prim.x_mm, cy = prim.y_mm, cz = placement;
    const double rad = prim.dims[0];
    const double lat2 = (r * n[0] - cx) * (r * n[0] - cx) + (r * n[1] - cy) * (r * n[1] - cy);
    const double dz = r * n[2] - cz;
    const bool inside = lat2 + dz * dz < rad * rad || (dz >= 0.0 && lat2 < rad * rad);
    if (!inside) return 0.0;
    double lower = r;
    const double nc = n[0] * cx + n[1] * cy + n[2] * cz;
    const double disc = nc * nc - (cx * cx + cy * cy + cz * cz) + rad * rad;
    if (disc > 0.0) lower = std::min(lower, nc - std::sqrt(disc));
    // Lateral distance along the ray: a rho^2 - 2 b rho + c < R^2.
    const double a = n[0] * n[0] + n[1] * n[1];
    const double b = n[0] * cx + n[1] * cy;
    const double c = cx * cx + cy * cy - rad * rad;
    double l1 = -std::numeric_limits<double>::infinity();
    double l2 = std::numeric_limits<double>::infinity();
    if (a > 0.0) {
      const double d = b * b - a * c;
      if (d > 0.0) {
        l1 = (b - std::sqrt(d)) / a;
        l2 = (b + std::sqrt(d)) / a;
      } else {
        l1 = l2 = std::numeric_limits<double>::quiet_NaN();
      }
    } else if (c >= 0.0) {
      l1 = l2 = std::numeric_limits<double>::quiet_NaN();
    }
    if (n[2] > 0.0 && !std::isnan(l1)) {
      const double from = std::max(l1, cz / n[2]);
      if (from < l2) lower = std::min(lower, from);
    }
    return std::clamp(r - std::max(lower, 0.0), 0.0, r);
  }

  // Flat face: inside while rho * n_z >= placement and the lateral point lies in the footprint.
  if (n[2] <= 0.0 || r * n[2] < placement || !fp.contains(r * n[0], r * n[1])) return 0.0;
  const double rho_face = std::max(placement / n[2], 0.0);
  if (fp.contains(rho_face * n[0], rho_face * n[1])) return std::clamp(r - rho_face, 0.0, r);
  // The ray leaves through a side wall first.
  double inside = r, outside = rho_face;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (inside + outside);
    if (fp.contains(mid * n[0], mid * n[1])) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return std::clamp(r - inside, 0.0, r);
}

struct RayPixel {
  int index;
  double n[3];
};

std::vector<RayPixel> field_rays(const PinLattice& lattice, const SimGeometry& geom) {
  std::vector<RayPixel> rays;
  const double r = geom.radius_mm;
  for (int v = 0; v < lattice.height; ++v) {
    for (int u = 0; u < lattice.width; ++u) {
      if (!lattice.field.contains(u, v)) continue;
      const double x = geom.pixel_pitch_mm * (u - lattice.field.center_x);
      const double y = geom.pixel_pitch_mm * (v - lattice.field.center_y);
      const double z2 = r * r - x * x - y * y;
      if (z2 < 0.0) continue;
      rays.push_back({v * lattice.width + u, {x / r, y / r, std::sqrt(z2) / r}});
    }
  }
  return rays;
}

void gaussian_blur(Grid<double>& g, double sigma) {
  if (!(sigma > 0.0)) return;
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * k * k / (sigma * sigma));
    kernel[static_cast<std::size_t>(k + radius)] = w;
    sum += w;
  }
  for (double& w : kernel) w /= sum;

  Grid<double> tmp(g.width(), g.height());
#pragma omp parallel for schedule(static)
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int xx = x + k;
        if (xx >= 0 && xx < g.width()) acc += kernel[static_cast<std::size_t>(k + radius)] * g(xx, y);
      }
      tmp(x, y) = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const int yy = y + k;
        if (yy >= 0 && yy < g.height()) acc += kernel[static_cast<std::size_t>(k + radius)] * tmp(x, yy);
      }
      g(x, y) = acc;
    }
  }
}

}  // namespace

const char* to_string(PrimitiveKind kind) noexcept {
  switch (kind) {
    case PrimitiveKind::Sphere: return "sphere";
    case PrimitiveKind::Box: return "box";
    case PrimitiveKind::Cylinder: return "cylinder";
    case PrimitiveKind::Crescent: return "crescent";
  }
  return "unknown";
}

PrimitiveKind parse_primitive_kind(const std::string& name) {
  if (name == "sphere" || name == "ball") return PrimitiveKind::Sphere;
  if (name == "box" || name == "cube") return PrimitiveKind::Box;
  if (name == "cylinder") return PrimitiveKind::Cylinder;
  if (name == "crescent") return PrimitiveKind::Crescent;
  throw Error(ErrorKind::Domain, "unknown primitive kind '" + name + "' (expected sphere, box, cylinder, crescent)");
}

void validate_lattice(const PinLattice& lattice) {
  if (lattice.width < 1 || lattice.height < 1) throw Error(ErrorKind::Domain, "lattice image size must be positive");
  validate_mask(lattice.field, lattice.width, lattice.height);
  if (!(lattice.pitch_px > 0.0)) throw Error(ErrorKind::Domain, "lattice pitch must be positive");
  if (!(lattice.pin_radius_px >= 0.0) || !(lattice.pin_radius_px < 0.5 * lattice.pitch_px)) {
    throw Error(ErrorKind::Domain, "pin radius must be in [0, pitch / 2)");
  }
}

void validate_exposure(const ExposureModel& exposure) {
  if (!(exposure.kappa >= 0.0 && exposure.kappa <= 1.0)) throw Error(ErrorKind::Domain, "kappa must be in [0, 1]");
  if (!(exposure.saturation_depth_mm > 0.0)) throw Error(ErrorKind::Domain, "saturation depth must be positive");
  if (!(exposure.skirt_sigma_px >= 0.0)) throw Error(ErrorKind::Domain, "skirt sigma must be >= 0");
  if (!(exposure.noise_stddev >= 0.0)) throw Error(ErrorKind::Domain, "noise stddev must be >= 0");
}

void validate_primitive(const ContactPrimitive& p, const SimGeometry& geom) {
  if (!(p.indent_depth_mm >= 0.0 && p.indent_depth_mm < geom.radius_mm)) {
    throw Error(ErrorKind::Domain, "indent depth must be in [0, sensor radius)");
  }
  const auto& d = p.dims;
  switch (p.kind) {
    case PrimitiveKind::Sphere:
    case PrimitiveKind::Cylinder:
      if (!(d[0] > 0.0)) throw Error(ErrorKind::Domain, "primitive radius must be positive");
      break;
    case PrimitiveKind::Box:
      if (!(d[0] > 0.0 && d[1] > 0.0)) throw Error(ErrorKind::Domain, "box sides must be positive");
      break;
    case PrimitiveKind::Crescent:
      if (!(d[0] > 0.0 && d[1] > 0.0 && d[2] >= 0.0)) throw Error(ErrorKind::Domain, "bad crescent dimensions");
      if (d[2] + d[0] <= d[1]) throw Error(ErrorKind::Domain, "crescent inner disc covers the outer disc");
      break;
  }
  if (!std::isfinite(p.x_mm) || !std::isfinite(p.y_mm) || !std::isfinite(p.yaw_rad)) {
    throw Error(ErrorKind::Domain, "primitive pose must be finite");
  }
  if (!(geom.radius_mm > 0.0 && geom.pixel_pitch_mm > 0.0)) throw Error(ErrorKind::Domain, "bad simulator geometry");
}

double pin_scale(double depth_mm, const ExposureModel& exposure) {
  const double d = std::clamp(depth_mm, 0.0, exposure.saturation_depth_mm);
  return 1.0 - exposure.kappa * d / exposure.saturation_depth_mm;
}

IndentResult indent(const ContactPrimitive& primitive, const SimGeometry& geom, const PinLattice& lattice,
                    const ExposureModel& exposure) {
  validate_lattice(lattice);
  validate_exposure(exposure);
  validate_primitive(primitive, geom);

  IndentResult result{HeightField(lattice.width, lattice.height), HeightField(lattice.width, lattice.height), 0.0};
  const double depth = primitive.indent_depth_mm;
  const double r = geom.radius_mm;
  const bool sphere = primitive.kind == PrimitiveKind::Sphere;
  const double no_contact = sphere ? r + primitive.dims[0] + 1.0 : r + 1.0;
  result.placement_mm = no_contact;
  if (depth == 0.0) return result;

  const Footprint fp(primitive);
  const std::vector<RayPixel> rays = field_rays(lattice, geom);
  const auto max_depth = [&](double placement) {
    double m = 0.0;
    for (const RayPixel& ray : rays) m = std::max(m, ray_depth(primitive, fp, r, ray.n, placement));
    return m;
  };

  // Penetration shrinks as the placement rises.
  double lo = -r;
  double hi = no_contact;
  if (max_depth(lo) < depth) return result;  // cannot reach the requested depth: treated as no contact
  for (int k = 0; k < 60 && hi - lo > 1e-12; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (max_depth(mid) >= depth) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  result.placement_mm = lo;

  for (const RayPixel& ray : rays) {
    const double h = ray_depth(primitive, fp, r, ray.n, lo);
    result.rigid.values()[static_cast<std::size_t>(ray.index)] = std::min(h, depth);
  }
  result.smoothed = result.rigid;
  gaussian_blur(result.smoothed, exposure.skirt_sigma_px);
  for (int v = 0; v < lattice.height; ++v) {
    for (int u = 0; u < lattice.width; ++u) {
      double& h = result.smoothed(u, v);
      if (!lattice.field.contains(u, v)) h = 0.0;
      h = std::clamp(h, 0.0, depth);
    }
  }
  return result;
}

HeightField indent_height(const ContactPrimitive& primitive, const SimGeometry& geom, const PinLattice& lattice,
                          const ExposureModel& exposure) {
  return indent(primitive, geom, lattice, exposure).smoothed;
}

std::vector<PinSite> pin_sites(const PinLattice& lattice) {
  std::vector<PinSite> sites;
  const double row_step = lattice.pitch_px * std::sqrt(3.0) / 2.0;
  const double reach = lattice.field.radius;
  const int rows = static_cast<int>(std::ceil(reach / row_step));
  const int cols = static_cast<int>(std::ceil(reach / lattice.pitch_px)) + 1;
  for (int j = -rows; j <= rows; ++j) {
    const double offset = (j & 1) ? 0.5 * lattice.pitch_px : 0.0;
    for (int i = -cols; i <= cols; ++i) {
      const PinSite s{lattice.field.center_x + i * lattice.pitch_px + offset, lattice.field.center_y + j * row_step};
      const double dx = s.x - lattice.field.center_x;
      const double dy = s.y - lattice.field.center_y;
      if (dx * dx + dy * dy <= reach * reach) sites.push_back(s);
    }
  }
  std::sort(sites.begin(), sites.end(), [](const PinSite& a, const PinSite& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return sites;
}

RasterImage render_pins(const PinLattice& lattice, const HeightField& h, const ExposureModel& exposure) {
  validate_lattice(lattice);
  validate_exposure(exposure);
  if (h.width() != lattice.width || h.height() != lattice.height) {
    throw Error(ErrorKind::Shape, "render_pins: height field does not match the lattice image size");
  }
  const auto discs = sim::pin_discs(lattice, h, exposure);
  RasterImage img(lattice.width, lattice.height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < lattice.height; ++y) sim::render_row(lattice, discs, img, y);
  sim::add_noise(lattice, exposure, img);
  return img;
}

RasterImage render_rest_frame(const PinLattice& lattice) {
  return render_pins(lattice, HeightField(lattice.width, lattice.height), ExposureModel{});
}

SyntheticFrame render_deformed_frame(const PinLattice& lattice, const HeightField& h, const ExposureModel& exposure) {
  SyntheticFrame frame;
  frame.image = render_pins(lattice, h, exposure);
  frame.truth_height = h;
  return frame;
}

std::string frame_metadata(const ContactPrimitive& p, const PinLattice& lattice, const ExposureModel& exposure,
                           const SimGeometry& geom, double placement_mm) {
  nlohmann::ordered_json j;
  j["primitive"] = {{"kind", to_string(p.kind)},
                    {"dims_mm", {p.dims[0], p.dims[1], p.dims[2]}},
                    {"x_mm", p.x_mm},
                    {"y_mm", p.y_mm},
                    {"yaw_rad", p.yaw_rad},
                    {"indent_depth_mm", p.indent_depth_mm},
                    {"placement_mm", placement_mm}};
  j["lattice"] = {{"width", lattice.width},
                  {"height", lattice.height},
                  {"field", {{"center_x", lattice.field.center_x},
                             {"center_y", lattice.field.center_y},
                             {"radius", lattice.field.radius}}},
                  {"pitch_px", lattice.pitch_px},
                  {"pin_radius_px", lattice.pin_radius_px},
                  {"marker_background", lattice.marker_background}};
  j["exposure"] = {{"kappa", exposure.kappa},
                   {"saturation_depth_mm", exposure.saturation_depth_mm},
                   {"skirt_sigma_px", exposure.skirt_sigma_px},
                   {"noise_stddev", exposure.noise_stddev},
                   {"seed", exposure.seed}};
  j["geometry"] = {{"radius_mm", geom.radius_mm}, {"pixel_pitch_mm", geom.pixel_pitch_mm}};
  return j.dump(2) + "\n";
}

SyntheticFrame simulate_contact(const ContactPrimitive& primitive, const PinLattice& lattice,
                                const ExposureModel& exposure, const SimGeometry& geom) {
  const IndentResult ind = indent(primitive, geom, lattice, exposure);
  SyntheticFrame frame = render_deformed_frame(lattice, ind.smoothed, exposure);
  frame.meta_json = frame_metadata(primitive, lattice, exposure, geom, ind.placement_mm);
  return frame;
}

}  // namespace tacshade
