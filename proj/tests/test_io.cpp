#include <doctest.h>

#include <filesystem>
#include <random>
#include <unistd.h>

#include "oracles.hpp"
#include "tacshade/io.hpp"

using namespace tacshade;
namespace fs = std::filesystem;

namespace {

struct ScratchDir {
  fs::path path;
  ScratchDir() : path(fs::temp_directory_path() / ("tacshade_io_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~ScratchDir() { fs::remove_all(path); }
};

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

RasterImage random_image(std::mt19937_64& rng, int w, int h) {
  RasterImage img(w, h);
  std::uniform_int_distribution<int> v(0, 255);
  for (auto& p : img.values()) p = static_cast<std::uint8_t>(v(rng));
  return img;
}

// Clouds are stored as float, so round trips agree to float precision.
void check_same_points(const std::vector<Vec3>& got, const std::vector<Vec3>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i].x == doctest::Approx(want[i].x).epsilon(1e-7));
    CHECK(got[i].y == doctest::Approx(want[i].y).epsilon(1e-7));
    CHECK(got[i].z == doctest::Approx(want[i].z).epsilon(1e-7));
  }
}

}  // namespace

TEST_CASE("pgm round trip in memory and on disk") {
  std::mt19937_64 rng(30);
  ScratchDir dir;
  for (int i = 0; i < 10; ++i) {
    const RasterImage img = random_image(rng, 1 + i * 7, 1 + i * 3);
    CHECK(decode_pgm(encode_pgm(img)) == img);
    write_image(dir.path / "a.pgm", img);
    CHECK(read_image(dir.path / "a.pgm") == img);
  }
}

TEST_CASE("pgm with comments and odd whitespace") {
  const std::string bytes = std::string("P5\n# comment\n2  1\n255\n") + '\x07' + '\xff';
  const RasterImage img = decode_pgm(bytes);
  CHECK(img.width() == 2);
  CHECK(img.values() == std::vector<std::uint8_t>{7, 255});
}

TEST_CASE("malformed pgm is a parse error") {
  CHECK(kind_of([] { decode_pgm("P2\n1 1\n255\n0"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { decode_pgm("P5\n2 2\n255\nab"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { decode_pgm("P5\nx 2\n255\n"); }) == ErrorKind::Parse);
}

TEST_CASE("png round trip") {
  std::mt19937_64 rng(31);
  ScratchDir dir;
  const RasterImage img = random_image(rng, 37, 21);
  write_image(dir.path / "a.png", img);
  CHECK(read_image(dir.path / "a.png") == img);
  write_file(dir.path / "bad.png", "not a png");
  CHECK(kind_of([&] { read_png(dir.path / "bad.png"); }) == ErrorKind::Parse);
}

TEST_CASE("grid round trip keeps float32 values and the range tag") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  Grid<double> g(13, 7);
  for (double& v : g.values()) v = static_cast<float>(u(rng));
  const DecodedGrid d = decode_grid(encode_grid(g, kHeightMagic, ValueRange::Normalized));
  CHECK(d.magic == "TSHF");
  CHECK(d.range == ValueRange::Normalized);
  CHECK(d.grid == g);

  ScratchDir dir;
  HeightField h(13, 7, g.values());
  write_height(dir.path / "h.tshf", h);
  CHECK(read_height(dir.path / "h.tshf").values() == g.values());
  const GreyscaleField grey(g, ValueRange::Raw);
  write_greyscale(dir.path / "g.tsgf", grey);
  CHECK(read_greyscale(dir.path / "g.tsgf").values() == g.values());
  CHECK(kind_of([&] { read_height(dir.path / "g.tsgf"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { decode_grid("TSHF\x01"); }) == ErrorKind::Parse);
}

TEST_CASE("ply and csv round trips") {
  std::mt19937_64 rng(33);
  ScratchDir dir;
  PointCloud c = oracle::random_cloud(rng, 25, 10.0);
  c.frame = "world";
  const PointCloud ply = decode_ply(encode_ply(c));
  CHECK(ply.frame == "world");
  check_same_points(ply.points, c.points);
  write_cloud(dir.path / "c.csv", c);
  check_same_points(read_cloud(dir.path / "c.csv").points, c.points);
  write_cloud(dir.path / "c.ply", c);
  check_same_points(read_cloud(dir.path / "c.ply").points, c.points);
  CHECK(decode_ply(encode_ply(PointCloud{})).empty());
}

TEST_CASE("ply reader tolerates extra properties and elements") {
  const std::string text =
      "ply\nformat ascii 1.0\nelement vertex 2\nproperty float y\nproperty float x\nproperty uchar red\n"
      "property float z\nelement face 0\nproperty list uchar int vertex_indices\nend_header\n"
      "1 2 255 3\n4 5 0 6\n";
  const PointCloud c = decode_ply(text);
  REQUIRE(c.size() == 2);
  CHECK(c.points[0] == Vec3{2, 1, 3});
  CHECK(c.points[1] == Vec3{5, 4, 6});
}

TEST_CASE("malformed clouds are parse errors") {
  CHECK(kind_of([] { decode_ply("plx\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { decode_ply("ply\nformat binary_little_endian 1.0\nend_header\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] {
          decode_ply("ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\n"
                     "property float z\nend_header\n1 2 3\n");
        }) == ErrorKind::Parse);
  CHECK(kind_of([] { decode_csv("x,y,z\n1,2,3\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { decode_csv("x_mm,y_mm,z_mm\n1,2\n"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { decode_csv("x_mm,y_mm,z_mm\n1,2,abc\n"); }) == ErrorKind::Parse);
}

TEST_CASE("manifest parsing with and without a g0 column") {
  const std::string no_g0 =
      "frame,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx,ty,tz,depth_mm\n"
      "a.pgm,1,0,0,0,1,0,0,0,1,1,2,3,2.5\n"
      "\n# skipped\n"
      "/abs/b.pgm,0,-1,0,1,0,0,0,0,1,0,0,0,1\n";
  const auto rows = parse_manifest(no_g0, "base");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].frame == fs::path("base") / "a.pgm");
  CHECK(rows[0].g0.empty());
  CHECK(rows[0].pose.translation() == Vec3{1, 2, 3});
  CHECK(rows[0].contact_depth_mm == 2.5);
  CHECK(rows[1].frame == fs::path("/abs/b.pgm"));
  CHECK(rows[1].pose.apply({1, 0, 0}).y == doctest::Approx(1.0));

  const auto with_g0 = parse_manifest("f.pgm,r.pgm,1,0,0,0,1,0,0,0,1,0,0,0,3\n", "");
  REQUIRE(with_g0.size() == 1);
  CHECK(with_g0[0].g0 == fs::path("r.pgm"));
  CHECK(parse_manifest(encode_manifest(with_g0), "")[0].g0 == fs::path("r.pgm"));
  CHECK(parse_manifest(encode_manifest(rows), "")[1].pose.rotation() == rows[1].pose.rotation());

  CHECK(kind_of([] { parse_manifest("a.pgm,1,0,0\n", ""); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_manifest("a.pgm,2,0,0,0,1,0,0,0,1,0,0,0,1\n", ""); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_manifest("a.pgm,1,0,0,0,1,0,0,0,1,0,0,0,x\n", ""); }) == ErrorKind::Parse);
}

TEST_CASE("missing files are io errors") {
  CHECK(kind_of([] { read_file("/nonexistent/tacshade/file"); }) == ErrorKind::Io);
  CHECK(kind_of([] { read_image("/nonexistent/tacshade/a.png"); }) == ErrorKind::Io);
  CHECK(kind_of([] { read_cloud("/nonexistent/tacshade/a.ply"); }) == ErrorKind::Io);
  ScratchDir dir;
  write_file(dir.path / "m.csv", "missing.pgm,1,0,0,0,1,0,0,0,1,0,0,0,1\n");
  CHECK(kind_of([&] { read_manifest(dir.path / "m.csv"); }) == ErrorKind::Io);
}

TEST_CASE("to_display stretches to the full range") {
  const Grid<double> g(3, 1, std::vector<double>{-1.0, 0.0, 1.0});
  CHECK(to_display(g).values() == std::vector<std::uint8_t>{0, 128, 255});
  CHECK(to_display(Grid<double>(2, 2, 5.0)).values() == std::vector<std::uint8_t>(4, 0));
}

TEST_CASE("a first data row whose path starts with 'frame' is not a header") {
  const auto rows = parse_manifest("frame.pgm,1,0,0,0,1,0,0,0,1,0,0,0,1\n", "");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].frame == fs::path("frame.pgm"));
}
