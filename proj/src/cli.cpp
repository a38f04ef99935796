#include "tacshade/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "tacshade/config.hpp"
#include "tacshade/io.hpp"
#include "tacshade/parallel.hpp"
#include "tacshade/pipeline.hpp"
#include "tacshade/pointcloud.hpp"
#include "tacshade/simulator.hpp"

namespace tacshade {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

struct PipelineFlags {
  std::string config;
  std::optional<int> window;
  std::optional<int> stride;
  std::optional<int> iters;
  std::optional<double> alpha;
  std::optional<double> radius_mm;
  std::optional<int> threads;

  void add(CLI::App* app) {
    app->add_option("--config", config, "key = value config file");
    app->add_option("--window", window, "ratio window size (odd)");
    app->add_option("--stride", stride, "ratio window stride");
    app->add_option("--iters", iters, "SFS iterations");
    app->add_option("--alpha", alpha, "height scale factor");
    app->add_option("--radius-mm", radius_mm, "hemisphere radius in mm");
    app->add_option("--threads", threads, "worker threads (default: TACSHADE_THREADS)");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg = config.empty() ? PipelineConfig{} : read_config(config);
    if (window) cfg.window = Window{*window, *window};
    if (stride) cfg.stride = *stride;
    if (iters) cfg.iterations = *iters;
    if (alpha) cfg.alpha = *alpha;
    if (radius_mm) cfg.radius_mm = *radius_mm;
    if (threads) cfg.threads = *threads;
    validate_config(cfg);
    set_thread_count(cfg.threads);
    return cfg;
  }
};

int cmd_reconstruct(const std::string& frame_path, const std::string& g0_path, const PipelineConfig& cfg,
                    const fs::path& out_dir, std::ostream& out) {
  const RasterImage frame = read_image(frame_path);
  const RasterImage g0 = read_image(g0_path);
  const Reconstruction rec = reconstruct(frame, g0, cfg);
  write_ply(out_dir / "cloud.ply", rec.lift.cloud);
  write_ply(out_dir / "contact.ply", contact_cloud(rec).cloud);
  write_height(out_dir / "height.tshf", rec.height_mm);
  out << "max_depth_mm=" << fixed(rec.max_depth_mm, 4) << " in_domain=" << rec.lift.cloud.size()
      << " skipped=" << rec.lift.skipped << " wall_ms=" << fixed(rec.wall_ms, 1) << "\n";
  return 0;
}

int cmd_evaluate(const std::string& recon_path, const std::string& truth_path, double h_max, std::ostream& out) {
  const PointCloud recon = read_cloud(recon_path);
  const PointCloud truth = read_cloud(truth_path);
  const EvalReport r = evaluate(recon, truth, h_max);
  out << "ME(mm)    d_CD(mm)  SD(%)\n";
  out << fixed(r.me_mm, 4) << "    " << fixed(r.chamfer_mm, 4) << "    " << fixed(r.sd_percent, 2) << "\n";
  nlohmann::ordered_json j{{"me_mm", r.me_mm}, {"chamfer_mm", r.chamfer_mm}, {"sd_percent", r.sd_percent},
                           {"h_max_mm", r.h_max_mm}};
  out << j.dump() << "\n";
  return 0;
}

int cmd_stitch(const std::string& manifest_path, const std::string& default_g0, const std::string& smooth_order,
               const PipelineConfig& cfg, const fs::path& out_dir, std::ostream& out) {
  const std::vector<ManifestRow> rows = read_manifest(manifest_path);
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, "manifest has no rows");

  std::vector<PointCloud> clouds;
  std::vector<RigidTransform> poses;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = "manifest row " + std::to_string(i);
    try {
      const fs::path g0_path = rows[i].g0.empty() ? fs::path(default_g0) : rows[i].g0;
      if (g0_path.empty()) throw Error(ErrorKind::Parse, "no g0 column and no --g0 given");
      const Reconstruction rec = reconstruct(read_image(rows[i].frame), read_image(g0_path), cfg);
      PointCloud cloud = contact_cloud(rec).cloud;
      if (smooth_order == "before" && cfg.smoothing_radius_mm > 0.0) cloud = smooth_z(cloud, cfg.smoothing_radius_mm);
      out << "row " << i << ": points=" << cloud.size() << " max_depth_mm=" << fixed(rec.max_depth_mm, 4)
          << " contact_depth_mm=" << fixed(rows[i].contact_depth_mm, 4) << " wall_ms=" << fixed(rec.wall_ms, 1)
          << "\n";
      clouds.push_back(std::move(cloud));
      poses.push_back(rows[i].pose);
    } catch (const Error& e) {
      throw Error(e.kind(), where + ": " + e.what());
    }
  }
  PointCloud fused = stitch(clouds, poses);
  if (smooth_order == "after" && cfg.smoothing_radius_mm > 0.0) {
    fused = smooth_z(fused, cfg.smoothing_radius_mm);
    fused.frame = "world";
  }
  write_ply(out_dir / "fused.ply", fused);
  out << "fused points=" << fused.size() << "\n";
  return 0;
}

struct SimulateFlags {
  std::string kind = "sphere";
  std::vector<double> dims;
  double x_mm = 0.0;
  double y_mm = 0.0;
  double yaw_rad = 0.0;
  double depth_mm = 2.0;
  PinLattice lattice;
  ExposureModel exposure;
  SimGeometry geom;
  std::string format = "pgm";
};

int cmd_simulate(const SimulateFlags& f, const fs::path& out_dir, std::ostream& out) {
  ContactPrimitive prim;
  prim.kind = parse_primitive_kind(f.kind);
  switch (prim.kind) {
    case PrimitiveKind::Sphere: prim.dims = {6.0, 0.0, 0.0}; break;
    case PrimitiveKind::Box: prim.dims = {8.0, 8.0, 0.0}; break;
    case PrimitiveKind::Cylinder: prim.dims = {5.0, 0.0, 0.0}; break;
    case PrimitiveKind::Crescent: prim.dims = {7.0, 6.0, 3.0}; break;
  }
  if (f.dims.size() > 3) throw Error(ErrorKind::Parse, "--dims takes at most 3 values");
  for (std::size_t i = 0; i < f.dims.size(); ++i) prim.dims[i] = f.dims[i];
  if (prim.kind == PrimitiveKind::Box && f.dims.size() == 1) prim.dims[1] = prim.dims[0];
  prim.x_mm = f.x_mm;
  prim.y_mm = f.y_mm;
  prim.yaw_rad = f.yaw_rad;
  prim.indent_depth_mm = f.depth_mm;

  const SyntheticFrame frame = simulate_contact(prim, f.lattice, f.exposure, f.geom);
  const RasterImage rest = render_pins(f.lattice, HeightField(f.lattice.width, f.lattice.height), f.exposure);
  const std::string ext = f.format == "png" ? ".png" : ".pgm";
  write_image(out_dir / ("frame" + ext), frame.image);
  write_image(out_dir / ("rest" + ext), rest);
  write_height(out_dir / "truth.tshf", frame.truth_height);
  write_file(out_dir / "meta.json", frame.meta_json);
  double max_h = 0.0;
  for (double v : frame.truth_height.values()) max_h = std::max(max_h, v);
  out << "simulated " << to_string(prim.kind) << " depth_mm=" << fixed(max_h, 4) << " -> " << out_dir.string() << "\n";
  return 0;
}

int cmd_grey(const std::string& frame_path, const std::string& g0_path, const PipelineConfig& cfg,
             const fs::path& out_dir, std::ostream& out) {
  const GreyStages s = greyscale_stages(read_image(frame_path), read_image(g0_path), cfg);
  write_image(out_dir / "binary.pgm", to_raster(s.binary));
  write_image(out_dir / "g.pgm", to_display(s.g));
  write_image(out_dir / "g0.pgm", to_display(s.g0));
  write_image(out_dir / "g_d.pgm", to_display(s.g_d));
  write_image(out_dir / "g_hn.pgm", to_display(s.g_hn));
  write_greyscale(out_dir / "g_hn.tsgf", s.g_hn);
  out << "threshold=" << s.threshold << " mask=" << fixed(s.mask.center_x, 2) << "," << fixed(s.mask.center_y, 2)
      << "," << fixed(s.mask.radius, 2) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"tacshade: tactile image to 3D contact shape"};
  app.name("tacshade");
  app.require_subcommand(1);

  std::string out_dir = ".";
  PipelineFlags pflags;

  auto* rec = app.add_subcommand("reconstruct", "reconstruct a contact frame against its rest frame");
  std::string frame_path, g0_path;
  rec->add_option("frame", frame_path, "deformed frame (PGM/PNG)")->required();
  rec->add_option("g0", g0_path, "rest frame (PGM/PNG)")->required();
  rec->add_option("--out", out_dir, "output directory");
  pflags.add(rec);

  auto* ev = app.add_subcommand("evaluate", "compare a reconstruction with a truth cloud");
  std::string recon_path, truth_path;
  double h_max = 0.0;
  ev->add_option("recon", recon_path, "reconstructed cloud (PLY/CSV)")->required();
  ev->add_option("truth", truth_path, "ground-truth cloud (PLY/CSV)")->required();
  ev->add_option("--h-max", h_max, "maximum contact depth in mm")->required();

  auto* st = app.add_subcommand("stitch", "reconstruct manifest rows and fuse them");
  std::string manifest_path, default_g0, smooth_order = "after";
  st->add_option("manifest", manifest_path, "manifest CSV")->required();
  st->add_option("--g0", default_g0, "rest frame for rows without a g0 column");
  st->add_option("--smooth-order", smooth_order, "after | before | none")
      ->check(CLI::IsMember({"after", "before", "none"}));
  st->add_option("--out", out_dir, "output directory");
  pflags.add(st);

  auto* sim = app.add_subcommand("simulate", "render a synthetic contact frame");
  SimulateFlags sf;
  sim->add_option("--kind", sf.kind, "sphere | box | cylinder | crescent");
  sim->add_option("--dims", sf.dims, "primitive dimensions in mm")->delimiter(',');
  sim->add_option("--x-mm", sf.x_mm, "contact x in mm");
  sim->add_option("--y-mm", sf.y_mm, "contact y in mm");
  sim->add_option("--yaw-rad", sf.yaw_rad, "primitive yaw in radians");
  sim->add_option("--depth-mm", sf.depth_mm, "indent depth in mm");
  sim->add_option("--width", sf.lattice.width, "image width");
  sim->add_option("--height", sf.lattice.height, "image height");
  sim->add_option("--field-cx", sf.lattice.field.center_x, "field centre x (px)");
  sim->add_option("--field-cy", sf.lattice.field.center_y, "field centre y (px)");
  sim->add_option("--field-radius", sf.lattice.field.radius, "field radius (px)");
  sim->add_option("--pitch-px", sf.lattice.pitch_px, "pin lattice pitch (px)");
  sim->add_option("--pin-radius-px", sf.lattice.pin_radius_px, "pin radius (px)");
  sim->add_option("--kappa", sf.exposure.kappa, "pin shrink factor");
  sim->add_option("--saturation-mm", sf.exposure.saturation_depth_mm, "exposure saturation depth");
  sim->add_option("--sigma-px", sf.exposure.skirt_sigma_px, "Gaussian skirt sigma (px)");
  sim->add_option("--noise", sf.exposure.noise_stddev, "grey-level noise stddev");
  sim->add_option("--seed", sf.exposure.seed, "noise seed");
  sim->add_option("--radius-mm", sf.geom.radius_mm, "hemisphere radius in mm");
  sim->add_option("--pixel-pitch-mm", sf.geom.pixel_pitch_mm, "mm per pixel");
  sim->add_option("--format", sf.format, "pgm | png")->check(CLI::IsMember({"pgm", "png"}));
  sim->add_option("--out", out_dir, "output directory");

  auto* grey = app.add_subcommand("grey", "write the intermediate greyscale images");
  grey->add_option("frame", frame_path, "deformed frame (PGM/PNG)")->required();
  grey->add_option("g0", g0_path, "rest frame (PGM/PNG)")->required();
  grey->add_option("--out", out_dir, "output directory");
  pflags.add(grey);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*rec) return cmd_reconstruct(frame_path, g0_path, pflags.resolve(), out_dir, out);
    if (*ev) return cmd_evaluate(recon_path, truth_path, h_max, out);
    if (*st) return cmd_stitch(manifest_path, default_g0, smooth_order, pflags.resolve(), out_dir, out);
    if (*grey) return cmd_grey(frame_path, g0_path, pflags.resolve(), out_dir, out);
    if (*sim) {
      try {
        parse_primitive_kind(sf.kind);
      } catch (const Error& e) {
        err << "error: " << e.what() << "\n" << sim->help();
        return 2;
      }
      return cmd_simulate(sf, out_dir, out);
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::Io ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace tacshade
