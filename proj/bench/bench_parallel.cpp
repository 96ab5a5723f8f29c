// Serial reference against the OpenMP paths of the parallel kernels.

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "curvegate/curvegeom.hpp"
#include "curvegate/device_sim.hpp"
#include "curvegate/dressing.hpp"
#include "curvegate/grape.hpp"
#include "curvegate/parallel.hpp"
#include "curvegate/slepian.hpp"

using namespace curvegate;
using std::numbers::pi;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) == 0 ? Exec::serial : Exec::parallel; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) == 0 ? "serial" : "parallel"); }

PiecewisePulse random_piecewise(int n, double dt) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PiecewisePulse pw{std::vector<double>(n), dt};
  for (auto& a : pw.amps) a = 2 * pi * 50e6 * u(g);
  return pw;
}

void BM_SearchLambda(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(search_lambda(pi / 6, 3 * pi, 1e-10, exec_of(s)));
  label(s);
}

void BM_GradientRotating(benchmark::State& s) {
  const auto pw = random_piecewise(600, 86.2e-9 / 600);
  const auto d = default_device();
  for (auto _ : s) benchmark::DoNotOptimize(cost_gradient(pw, Frame::rotating, d, 0.5e-12, exec_of(s)));
  label(s);
}

void BM_GradientFull(benchmark::State& s) {
  const auto pw = random_piecewise(200, 28.4e-9 / 200);
  const auto d = default_device();
  for (auto _ : s) benchmark::DoNotOptimize(cost_gradient(pw, Frame::full, d, 0.5e-12, exec_of(s)));
  label(s);
}

void BM_Dressing(benchmark::State& s) {
  const Mat4 u = expm_hermitian_skew(pauli_product("ZZ") + 0.3 * pauli_product("XY"), 0.7);
  for (auto _ : s) benchmark::DoNotOptimize(optimize_dressing(u, gates::cnot(), 20, 0, exec_of(s)));
  label(s);
}

void BM_DetuningSweep(benchmark::State& s) {
  const auto d = default_device();
  const Pulse p = pulse_from_curve(integrate_space_curve(sample_ansatz(0.221163, 2 * pi / 3), 0.5 * d.j));
  const auto grid = detuning_grid(auto_drive_frequency(d), 2 * pi * 1e6, 5);
  for (auto _ : s)
    benchmark::DoNotOptimize(
        sweep_detuning(d, p, PropagationConfig::defaults(Frame::full), grid, gates::cnot(), 5, 0, exec_of(s)));
  label(s);
}

void BM_SlepianMultistart(benchmark::State& s) {
  const auto b = dpss(200, 6.0, 12);
  GrapeConfig cfg;
  cfg.max_iters = 20;
  cfg.exec = exec_of(s);
  for (auto _ : s) benchmark::DoNotOptimize(slepian_multistart(b, 28.4e-9, 2 * pi * 48e6, 10, 0, cfg));
  label(s);
}

}  // namespace

BENCHMARK(BM_SearchLambda)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientRotating)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GradientFull)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dressing)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetuningSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);
BENCHMARK(BM_SlepianMultistart)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(1);

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
}
