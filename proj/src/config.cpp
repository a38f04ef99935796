#include "tacshade/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tacshade/io.hpp"

namespace tacshade {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(int line, const std::string& key, const std::string& value) {
  throw Error(ErrorKind::Parse, "config line " + std::to_string(line) + ": bad value for " + key + ": '" + value + "'");
}

int to_int(int line, const std::string& key, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad(line, key, v);
  return out;
}

double to_double(int line, const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) bad(line, key, v);
  return out;
}

bool to_bool(int line, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  bad(line, key, v);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void validate_config(const PipelineConfig& cfg) {
  validate_window(cfg.window, cfg.stride);
  if (cfg.threshold && (*cfg.threshold < 0 || *cfg.threshold > 256)) {
    throw Error(ErrorKind::Domain, "threshold must be in [0, 256]");
  }
  if (!(cfg.tvd_weight >= 0.0)) throw Error(ErrorKind::Domain, "tvd_weight must be >= 0");
  if (cfg.tvd_iters < 0) throw Error(ErrorKind::Domain, "tvd_iters must be >= 0");
  if (cfg.iterations < 0) throw Error(ErrorKind::Domain, "iterations must be >= 0");
  if (!(cfg.derivative_guard_eps > 0.0)) throw Error(ErrorKind::Domain, "guard_eps must be > 0");
  if (!(cfg.shading_contrast > 0.0 && cfg.shading_contrast <= 1.0)) {
    throw Error(ErrorKind::Domain, "shading_contrast must be in (0, 1]");
  }
  if (!(cfg.shading_floor > 0.0 && cfg.shading_floor < 1.0)) throw Error(ErrorKind::Domain, "shading_floor must be in (0, 1)");
  if (!(cfg.alpha > 0.0)) throw Error(ErrorKind::Domain, "alpha must be > 0");
  if (!(cfg.radius_mm > 0.0)) throw Error(ErrorKind::Domain, "radius_mm must be > 0");
  if (cfg.pixel_pitch_mm && !(*cfg.pixel_pitch_mm > 0.0)) throw Error(ErrorKind::Domain, "pixel_pitch_mm must be > 0");
  if (cfg.mask && !(cfg.mask->radius > 0.0)) throw Error(ErrorKind::InvalidMask, "mask radius must be > 0");
  if (!(cfg.smoothing_radius_mm >= 0.0)) throw Error(ErrorKind::Domain, "smoothing_radius_mm must be >= 0");
  if (cfg.threads < 0) throw Error(ErrorKind::Domain, "threads must be >= 0");
}

PipelineConfig parse_config(const std::string& text, PipelineConfig cfg) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string t = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parse, "config line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string v = trim(t.substr(eq + 1));

    if (key == "window") {
      const auto x = v.find('x');
      if (x == std::string::npos) {
        cfg.window.width = cfg.window.height = to_int(line, key, v);
      } else {
        cfg.window.width = to_int(line, key, v.substr(0, x));
        cfg.window.height = to_int(line, key, v.substr(x + 1));
      }
    } else if (key == "stride") {
      cfg.stride = to_int(line, key, v);
    } else if (key == "threshold") {
      cfg.threshold = v == "auto" ? std::nullopt : std::optional<int>(to_int(line, key, v));
    } else if (key == "tvd_weight") {
      cfg.tvd_weight = to_double(line, key, v);
    } else if (key == "tvd_iters") {
      cfg.tvd_iters = to_int(line, key, v);
    } else if (key == "iterations") {
      cfg.iterations = to_int(line, key, v);
    } else if (key == "guard_eps") {
      cfg.derivative_guard_eps = to_double(line, key, v);
    } else if (key == "clamp_gd") {
      cfg.clamp_negative_gd = to_bool(line, key, v);
    } else if (key == "shading_contrast") {
      cfg.shading_contrast = to_double(line, key, v);
    } else if (key == "shading_floor") {
      cfg.shading_floor = to_double(line, key, v);
    } else if (key == "alpha") {
      cfg.alpha = to_double(line, key, v);
    } else if (key == "radius_mm") {
      cfg.radius_mm = to_double(line, key, v);
    } else if (key == "pixel_pitch_mm") {
      cfg.pixel_pitch_mm = v == "auto" ? std::nullopt : std::optional<double>(to_double(line, key, v));
    } else if (key == "mask") {
      if (v == "auto") {
        cfg.mask.reset();
      } else {
        const auto c1 = v.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : v.find(',', c1 + 1);
        if (c2 == std::string::npos) bad(line, key, v);
        cfg.mask = CircularMask{to_double(line, key, trim(v.substr(0, c1))),
                                to_double(line, key, trim(v.substr(c1 + 1, c2 - c1 - 1))),
                                to_double(line, key, trim(v.substr(c2 + 1)))};
      }
    } else if (key == "smoothing_radius_mm") {
      cfg.smoothing_radius_mm = to_double(line, key, v);
    } else if (key == "threads") {
      cfg.threads = to_int(line, key, v);
    } else {
      throw Error(ErrorKind::Parse, "config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

std::string serialize_config(const PipelineConfig& cfg) {
  std::string out;
  const auto put = [&](const char* key, const std::string& value) { out += std::string(key) + " = " + value + "\n"; };
  put("window", std::to_string(cfg.window.width) + "x" + std::to_string(cfg.window.height));
  put("stride", std::to_string(cfg.stride));
  put("threshold", cfg.threshold ? std::to_string(*cfg.threshold) : "auto");
  put("tvd_weight", num(cfg.tvd_weight));
  put("tvd_iters", std::to_string(cfg.tvd_iters));
  put("iterations", std::to_string(cfg.iterations));
  put("guard_eps", num(cfg.derivative_guard_eps));
  put("clamp_gd", cfg.clamp_negative_gd ? "true" : "false");
  put("shading_contrast", num(cfg.shading_contrast));
  put("shading_floor", num(cfg.shading_floor));
  put("alpha", num(cfg.alpha));
  put("radius_mm", num(cfg.radius_mm));
  put("pixel_pitch_mm", cfg.pixel_pitch_mm ? num(*cfg.pixel_pitch_mm) : "auto");
  put("mask", cfg.mask ? num(cfg.mask->center_x) + "," + num(cfg.mask->center_y) + "," + num(cfg.mask->radius) : "auto");
  put("smoothing_radius_mm", num(cfg.smoothing_radius_mm));
  put("threads", std::to_string(cfg.threads));
  return out;
}

PipelineConfig read_config(const std::filesystem::path& path) { return parse_config(read_file(path)); }

}  // namespace tacshade
