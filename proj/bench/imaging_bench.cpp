// FFTW-backed parallel imaging against the serial direct-DFT reference.
#include <benchmark/benchmark.h>

#include "mmwcarry/imaging.hpp"
#include "mmwcarry/scene_sim.hpp"

namespace {

mmw::RadarConfig bench_config(int chirps) {
  auto cfg = mmw::default_radar_config();
  cfg.chirps_per_frame = chirps;
  return cfg;
}

mmw::IFCube4D bench_cube(const mmw::RadarConfig& cfg) {
  std::vector<mmw::Scatterer> sc{{{0.5, 5.0, 0.2}, 1.0, mmw::ScatterTag::body},
                                 {{-1.0, 8.0, 0.0}, 0.6, mmw::ScatterTag::laptop}};
  return mmw::synth_if_scatterers(sc, cfg, 7, 0).cube;
}

void BM_Image3D(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  const auto va = mmw::form_virtual_array(cfg.tx_positions, cfg.rx_positions);
  const auto cube = bench_cube(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(mmw::image_3d(cube, va, cfg));
}

void BM_Image3DReference(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  const auto va = mmw::form_virtual_array(cfg.tx_positions, cfg.rx_positions);
  const auto cube = bench_cube(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(mmw::image_3d_reference(cube, va, cfg));
}

void BM_SynthFrame(benchmark::State& state) {
  const auto cfg = bench_config(static_cast<int>(state.range(0)));
  std::vector<mmw::Scatterer> sc{{{0.5, 5.0, 0.2}, 1.0, mmw::ScatterTag::body}};
  for (auto _ : state) benchmark::DoNotOptimize(mmw::synth_if_scatterers(sc, cfg, 7, 0));
}

}  // namespace

BENCHMARK(BM_Image3D)->Arg(1)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Image3DReference)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SynthFrame)->Arg(50)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
