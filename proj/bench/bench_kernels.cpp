#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "slcone/grid.hpp"
#include "slcone/periods.hpp"
#include "slcone/verify.hpp"

using namespace slcone;

namespace {

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

const ConeImmersion& half_torus() {
  static const ConeImmersion im(ConeParameters::make(0.5, 0.0));
  return im;
}

SurfaceGrid torus_grid(int n, Exec e) {
  const TorusSpec spec = torus_lattice(1, 2);
  return make_grid(half_torus(), {0.0, spec.lattice.basis[0].sigma},
                   {0.0, spec.lattice.basis[1].tau}, n, n, true, e);
}

void BM_MakeGrid(benchmark::State& st) {
  const ConeImmersion im(ConeParameters::make(0.5, 0.1));
  for (auto _ : st)
    benchmark::DoNotOptimize(
        make_grid(im, {0.0, 2 * std::numbers::pi}, {0.0, im.basic_period()}, 200, 200, false,
                  exec_of(st)));
}

void BM_HarmonicResidual(benchmark::State& st) {
  const SurfaceGrid g = torus_grid(400, Exec::parallel);
  const FdOptions o{1, 0, exec_of(st)};
  for (auto _ : st) benchmark::DoNotOptimize(harmonic_residual(g, o));
}

void BM_Calibration(benchmark::State& st) {
  const SurfaceGrid g = torus_grid(400, Exec::parallel);
  const FdOptions o{1, 0, exec_of(st)};
  for (auto _ : st) benchmark::DoNotOptimize(calibration_defect(g, 0.0, o));
}

void BM_EmbeddednessScan(benchmark::State& st) {
  const TorusSpec spec = torus_lattice(1, 2);
  const SurfaceGrid g = torus_grid(400, Exec::parallel);
  for (auto _ : st) benchmark::DoNotOptimize(embeddedness_scan(spec, g, 0.0, exec_of(st)));
}

void BM_Theta2Sweep(benchmark::State& st) {
  std::vector<double> J;
  for (int i = 1; i <= 16; ++i) J.push_back(kJMax * i / 17.0);
  for (auto _ : st) benchmark::DoNotOptimize(theta2_sweep(J, exec_of(st)));
}

}  // namespace

BENCHMARK(BM_MakeGrid)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HarmonicResidual)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Calibration)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmbeddednessScan)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Theta2Sweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
