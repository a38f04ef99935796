// Times the OpenMP kernels against their serial references on a simulated
// 640x480 frame and checks that both produce identical output.

#include <chrono>
#include <cstdio>
#include <functional>

#include "tacshade/image_core.hpp"
#include "tacshade/parallel.hpp"
#include "tacshade/pipeline.hpp"
#include "tacshade/serial_reference.hpp"
#include "tacshade/simulator.hpp"

using namespace tacshade;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-20s serial %9.2f ms   openmp %9.2f ms   speedup %5.2fx   %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("threads: %d\n", set_thread_count(0));

  const PinLattice lattice;
  const ExposureModel exposure;
  ContactPrimitive ball;
  ball.indent_depth_mm = 3.0;
  const HeightField h = indent_height(ball, SimGeometry{}, lattice, exposure);
  const RasterImage frame = render_pins(lattice, h, exposure);
  const RasterImage rest = render_rest_frame(lattice);
  const BinaryImage b = binarize(frame);
  bool ok = true;

  {
    GreyscaleField s, p;
    const double ts = time_ms([&] { s = serial::ratio_convolution(b); }, reps);
    const double tp = time_ms([&] { p = ratio_convolution(b); }, reps);
    report("ratio_convolution", ts, tp, s == p);
    ok = ok && s == p;
  }
  {
    const GreyscaleField g = ratio_convolution(b);
    GreyscaleField s, p;
    const double ts = time_ms([&] { s = serial::tvd_denoise(g); }, reps);
    const double tp = time_ms([&] { p = tvd_denoise(g); }, reps);
    report("tvd_denoise", ts, tp, s == p);
    ok = ok && s == p;
  }
  {
    HeightField hp(h.width(), h.height());
    for (std::size_t i = 0; i < h.size(); ++i) hp.values()[i] = 20.0 * h.values()[i];
    GreyscaleField s, p;
    const double ts = time_ms([&] { s = serial::lambertian_render(hp); }, reps);
    const double tp = time_ms([&] { p = lambertian_render(hp); }, reps);
    report("lambertian_render", ts, tp, s == p);
    ok = ok && s == p;
  }
  {
    RasterImage s, p;
    const double ts = time_ms([&] { s = serial::render_pins(lattice, h, exposure); }, reps);
    const double tp = time_ms([&] { p = render_pins(lattice, h, exposure); }, reps);
    report("render_pins", ts, tp, s == p);
    ok = ok && s == p;
  }
  {
    PipelineConfig cfg;
    double wall = 0.0;
    const double t = time_ms([&] { wall = reconstruct(frame, rest, cfg).wall_ms; }, reps);
    std::printf("%-20s %9.2f ms (pipeline-reported %.2f ms)\n", "reconstruct", t, wall);
  }
  return ok ? 0 : 1;
}
