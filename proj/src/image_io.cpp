#include <png.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "tacshade/io.hpp"

namespace tacshade {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::Io, "read failed: " + path.string());
  return bytes;
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed: " + path.string());
}

namespace {

// Reads the next header token of a PNM file, skipping whitespace and comments.
std::string pnm_token(const std::string& bytes, std::size_t& pos) {
  for (;;) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    if (pos < bytes.size() && bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  return bytes.substr(start, pos - start);
}

int parse_positive(const std::string& token, const char* what) {
  if (token.empty() || !std::all_of(token.begin(), token.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw Error(ErrorKind::Parse, std::string("PGM: bad ") + what + " '" + token + "'");
  }
  const long v = std::stol(token);
  if (v < 1 || v > 1'000'000) throw Error(ErrorKind::Parse, std::string("PGM: ") + what + " out of range");
  return static_cast<int>(v);
}

}  // namespace

RasterImage decode_pgm(const std::string& bytes) {
  std::size_t pos = 0;
  if (pnm_token(bytes, pos) != "P5") throw Error(ErrorKind::Parse, "PGM: expected binary P5 magic");
  const int width = parse_positive(pnm_token(bytes, pos), "width");
  const int height = parse_positive(pnm_token(bytes, pos), "height");
  const int maxval = parse_positive(pnm_token(bytes, pos), "maxval");
  if (maxval > 255) throw Error(ErrorKind::Parse, "PGM: only 8-bit images are supported");
  ++pos;  // single whitespace after maxval
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < pos + n) throw Error(ErrorKind::Parse, "PGM: truncated pixel data");
  std::vector<std::uint8_t> data(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                                 bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return RasterImage(width, height, std::move(data));
}

std::string encode_pgm(const RasterImage& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(img.values().data()), img.values().size());
  return out;
}

RasterImage read_pgm(const fs::path& path) { return decode_pgm(read_file(path)); }

void write_pgm(const fs::path& path, const RasterImage& img) { write_file(path, encode_pgm(img)); }

RasterImage read_png(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorKind::Io, "cannot open " + path.string());
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw Error(ErrorKind::Parse, "PNG: " + path.string() + ": " + image.message);
  }
  image.format = PNG_FORMAT_GRAY;
  if (image.width < 1 || image.height < 1) {
    png_image_free(&image);
    throw Error(ErrorKind::Parse, "PNG: empty image");
  }
  RasterImage img(static_cast<int>(image.width), static_cast<int>(image.height));
  if (!png_image_finish_read(&image, nullptr, img.values().data(), 0, nullptr)) {
    throw Error(ErrorKind::Parse, "PNG: " + path.string() + ": " + image.message);
  }
  return img;
}

void write_png(const fs::path& path, const RasterImage& img) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, img.values().data(), 0, nullptr)) {
    throw Error(ErrorKind::Io, "PNG: cannot write " + path.string() + ": " + image.message);
  }
}

namespace {

bool is_png(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png";
}

}  // namespace

RasterImage read_image(const fs::path& path) { return is_png(path) ? read_png(path) : read_pgm(path); }

void write_image(const fs::path& path, const RasterImage& img) {
  if (is_png(path)) {
    write_png(path, img);
  } else {
    write_pgm(path, img);
  }
}

RasterImage to_display(const Grid<double>& field) {
  RasterImage out(field.width(), field.height());
  const auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
  const double span = *hi - *lo;
  if (!(span > 0.0)) return out;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double v = 255.0 * (field.values()[i] - *lo) / span;
    out.values()[i] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  }
  return out;
}

}  // namespace tacshade
