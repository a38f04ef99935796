#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tacshade/io.hpp"

namespace tacshade {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& token, const std::string& context) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  if (!token.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorKind::Parse, context + ": bad number '" + token + "'");
  }
  return v;
}

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

bool has_extension(const fs::path& path, const char* ext) {
  std::string e = path.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

}  // namespace

// PLY --------------------------------------------------------------------------

std::string encode_ply(const PointCloud& cloud) {
  std::string out;
  out.reserve(64 + cloud.size() * 36);
  out += "ply\nformat ascii 1.0\ncomment frame ";
  out += cloud.frame;
  out += "\nelement vertex " + std::to_string(cloud.size()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\nend_header\n";
  for (const Vec3& p : cloud.points) {
    out += format_coord(p.x);
    out += ' ';
    out += format_coord(p.y);
    out += ' ';
    out += format_coord(p.z);
    out += '\n';
  }
  return out;
}

PointCloud decode_ply(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "ply") throw Error(ErrorKind::Parse, "PLY: missing 'ply' magic");

  PointCloud cloud;
  std::size_t vertex_count = 0;
  bool in_vertex = false;
  bool saw_vertex = false;
  std::vector<std::string> props;
  for (;;) {
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "PLY: header not terminated");
    const std::string t = trim(line);
    if (t == "end_header") break;
    std::istringstream words(t);
    std::string key;
    words >> key;
    if (key == "format") {
      std::string fmt;
      words >> fmt;
      if (fmt != "ascii") throw Error(ErrorKind::Parse, "PLY: only ascii format is supported");
    } else if (key == "comment") {
      std::string tag, value;
      words >> tag >> value;
      if (tag == "frame" && !value.empty()) cloud.frame = value;
    } else if (key == "element") {
      std::string name;
      long long count = -1;
      words >> name >> count;
      if (count < 0) throw Error(ErrorKind::Parse, "PLY: bad element count");
      in_vertex = name == "vertex";
      if (in_vertex) {
        if (saw_vertex) throw Error(ErrorKind::Parse, "PLY: duplicate vertex element");
        saw_vertex = true;
        vertex_count = static_cast<std::size_t>(count);
      } else if (!saw_vertex) {
        throw Error(ErrorKind::Parse, "PLY: elements before 'vertex' are not supported");
      }
    } else if (key == "property") {
      if (!in_vertex) continue;
      std::string type, name;
      words >> type;
      if (type == "list") throw Error(ErrorKind::Parse, "PLY: list properties on vertex are not supported");
      words >> name;
      props.push_back(name);
    }
  }
  if (!saw_vertex) throw Error(ErrorKind::Parse, "PLY: no vertex element");
  const auto find = [&](const char* name) {
    const auto it = std::find(props.begin(), props.end(), name);
    if (it == props.end()) throw Error(ErrorKind::Parse, std::string("PLY: missing property ") + name);
    return static_cast<std::size_t>(it - props.begin());
  };
  const std::size_t ix = find("x"), iy = find("y"), iz = find("z");

  cloud.points.reserve(vertex_count);
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < vertex_count; ++i) {
    if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "PLY: truncated vertex list");
    std::istringstream words(line);
    fields.clear();
    std::string w;
    while (words >> w) fields.push_back(w);
    if (fields.size() < props.size()) throw Error(ErrorKind::Parse, "PLY: short vertex line " + std::to_string(i));
    const std::string ctx = "PLY vertex " + std::to_string(i);
    cloud.points.push_back({parse_double(fields[ix], ctx), parse_double(fields[iy], ctx), parse_double(fields[iz], ctx)});
  }
  return cloud;
}

void write_ply(const fs::path& path, const PointCloud& cloud) { write_file(path, encode_ply(cloud)); }

PointCloud read_ply(const fs::path& path) { return decode_ply(read_file(path)); }

// CSV --------------------------------------------------------------------------

std::string encode_csv(const PointCloud& cloud) {
  std::string out = "x_mm,y_mm,z_mm\n";
  for (const Vec3& p : cloud.points) {
    out += format_coord(p.x) + "," + format_coord(p.y) + "," + format_coord(p.z) + "\n";
  }
  return out;
}

PointCloud decode_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x_mm,y_mm,z_mm") {
    throw Error(ErrorKind::Parse, "CSV: expected header x_mm,y_mm,z_mm");
  }
  PointCloud cloud;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 3) throw Error(ErrorKind::Parse, "CSV: row " + std::to_string(row) + " needs 3 fields");
    const std::string ctx = "CSV row " + std::to_string(row);
    cloud.points.push_back({parse_double(fields[0], ctx), parse_double(fields[1], ctx), parse_double(fields[2], ctx)});
  }
  return cloud;
}

void write_csv(const fs::path& path, const PointCloud& cloud) { write_file(path, encode_csv(cloud)); }

PointCloud read_csv(const fs::path& path) { return decode_csv(read_file(path)); }

PointCloud read_cloud(const fs::path& path) { return has_extension(path, ".csv") ? read_csv(path) : read_ply(path); }

void write_cloud(const fs::path& path, const PointCloud& cloud) {
  if (has_extension(path, ".csv")) {
    write_csv(path, cloud);
  } else {
    write_ply(path, cloud);
  }
}

// Manifest ---------------------------------------------------------------------

std::vector<ManifestRow> parse_manifest(const std::string& text, const fs::path& base_dir) {
  std::vector<ManifestRow> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fields = split(t, ',');
    if (rows.empty() && fields[0] == "frame") continue;  // header
    if (fields.size() != 14 && fields.size() != 15) {
      throw Error(ErrorKind::Parse, "manifest line " + std::to_string(line_no) + ": expected 14 or 15 fields, got " +
                                        std::to_string(fields.size()));
    }
    const bool has_g0 = fields.size() == 15;
    const std::size_t first_num = has_g0 ? 2 : 1;
    const std::string ctx = "manifest line " + std::to_string(line_no);
    Mat3 rot{};
    for (std::size_t k = 0; k < 9; ++k) rot[k] = parse_double(fields[first_num + k], ctx);
    const Vec3 t3{parse_double(fields[first_num + 9], ctx), parse_double(fields[first_num + 10], ctx),
                  parse_double(fields[first_num + 11], ctx)};
    ManifestRow row;
    const auto resolve = [&](const std::string& p) {
      const fs::path path(p);
      return path.is_relative() ? base_dir / path : path;
    };
    row.frame = resolve(fields[0]);
    if (has_g0) row.g0 = resolve(fields[1]);
    try {
      row.pose = RigidTransform(rot, t3);
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, ctx + ": " + e.what());
    }
    row.contact_depth_mm = parse_double(fields[first_num + 12], ctx);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ManifestRow> read_manifest(const fs::path& path) {
  auto rows = parse_manifest(read_file(path), path.parent_path());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!fs::exists(rows[i].frame)) {
      throw Error(ErrorKind::Io, "manifest row " + std::to_string(i) + ": missing " + rows[i].frame.string());
    }
    if (!rows[i].g0.empty() && !fs::exists(rows[i].g0)) {
      throw Error(ErrorKind::Io, "manifest row " + std::to_string(i) + ": missing " + rows[i].g0.string());
    }
  }
  return rows;
}

std::string encode_manifest(const std::vector<ManifestRow>& rows) {
  const bool with_g0 = std::any_of(rows.begin(), rows.end(), [](const ManifestRow& r) { return !r.g0.empty(); });
  std::string out = with_g0 ? "frame,g0,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz,depth_mm\n"
                            : "frame,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz,depth_mm\n";
  char buf[32];
  for (const ManifestRow& r : rows) {
    out += r.frame.string();
    if (with_g0) out += "," + r.g0.string();
    for (double v : r.pose.rotation()) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    for (double v : {r.pose.translation().x, r.pose.translation().y, r.pose.translation().z, r.contact_depth_mm}) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace tacshade
