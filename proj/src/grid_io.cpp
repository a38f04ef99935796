#include <bit>
#include <cstring>

#include "tacshade/io.hpp"

namespace tacshade {

namespace {

static_assert(std::endian::native == std::endian::little, "grid codec assumes a little-endian host");

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

std::uint32_t get_u32(const std::string& bytes, std::size_t offset) {
  std::uint32_t v;
  std::memcpy(&v, bytes.data() + offset, 4);
  return v;
}

}  // namespace

std::string encode_grid(const Grid<double>& grid, const char (&magic)[5], ValueRange range) {
  std::string out;
  out.reserve(16 + 4 * grid.size());
  out.append(magic, 4);
  put_u32(out, static_cast<std::uint32_t>(grid.width()));
  put_u32(out, static_cast<std::uint32_t>(grid.height()));
  put_u32(out, static_cast<std::uint32_t>(range));
  for (double v : grid.values()) {
    const float f = static_cast<float>(v);
    char b[4];
    std::memcpy(b, &f, 4);
    out.append(b, 4);
  }
  return out;
}

DecodedGrid decode_grid(const std::string& bytes) {
  if (bytes.size() < 16) throw Error(ErrorKind::Parse, "grid: file shorter than its 16-byte header");
  DecodedGrid out;
  out.magic = bytes.substr(0, 4);
  if (out.magic != kGreyscaleMagic && out.magic != kHeightMagic) {
    throw Error(ErrorKind::Parse, "grid: unknown magic '" + out.magic + "'");
  }
  const std::uint32_t width = get_u32(bytes, 4);
  const std::uint32_t height = get_u32(bytes, 8);
  const std::uint32_t code = get_u32(bytes, 12);
  if (code > static_cast<std::uint32_t>(ValueRange::Unbounded)) {
    throw Error(ErrorKind::Parse, "grid: unknown value-range code " + std::to_string(code));
  }
  if (width < 1 || height < 1 || width > 1'000'000 || height > 1'000'000) {
    throw Error(ErrorKind::Parse, "grid: bad dimensions");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() != 16 + 4 * n) throw Error(ErrorKind::Parse, "grid: payload size does not match header");
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    float f;
    std::memcpy(&f, bytes.data() + 16 + 4 * i, 4);
    data[i] = f;
  }
  out.range = static_cast<ValueRange>(code);
  out.grid = Grid<double>(static_cast<int>(width), static_cast<int>(height), std::move(data));
  return out;
}

void write_greyscale(const std::filesystem::path& path, const GreyscaleField& g) {
  write_file(path, encode_grid(g, kGreyscaleMagic, g.range));
}

GreyscaleField read_greyscale(const std::filesystem::path& path) {
  DecodedGrid d = decode_grid(read_file(path));
  if (d.magic != kGreyscaleMagic) throw Error(ErrorKind::Parse, path.string() + " is not a TSGF grid");
  return GreyscaleField(std::move(d.grid), d.range);
}

void write_height(const std::filesystem::path& path, const HeightField& h) {
  write_file(path, encode_grid(h, kHeightMagic, ValueRange::Millimetres));
}

HeightField read_height(const std::filesystem::path& path) {
  DecodedGrid d = decode_grid(read_file(path));
  if (d.magic != kHeightMagic) throw Error(ErrorKind::Parse, path.string() + " is not a TSHF grid");
  HeightField h(d.grid.width(), d.grid.height());
  h.values() = std::move(d.grid.values());
  return h;
}

}  // namespace tacshade
