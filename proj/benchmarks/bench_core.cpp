#include <benchmark/benchmark.h>

#include "tme/jsf_kernel.hpp"
#include "tme/stimulated_iteration.hpp"
#include "tme/svd_oracle.hpp"

namespace {

tme::KernelParams params_for(int n, double chirp) {
  tme::KernelParams p;
  p.signal_grid = tme::make_grid(static_cast<std::size_t>(n), tme::kDefaultHalfWidth);
  p.idler_grid = p.signal_grid;
  p.chirp_strength = chirp;
  return p;
}

void BM_BuildKernel(benchmark::State& state) {
  const auto p = params_for(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(tme::build_fiber_jsf(p));
}
BENCHMARK(BM_BuildKernel)->Arg(101)->Arg(201)->Arg(401);

void BM_HalfStep(benchmark::State& state) {
  const auto jsa = tme::build_fiber_jsf(params_for(static_cast<int>(state.range(0)), 0.0));
  const auto seed = tme::gaussian_seed(jsa.signal_grid());
  for (auto _ : state) benchmark::DoNotOptimize(tme::idler_from_signal(jsa, seed));
}
BENCHMARK(BM_HalfStep)->Arg(101)->Arg(201)->Arg(401);

void BM_ExtractFirstMode(benchmark::State& state) {
  const auto jsa = tme::build_fiber_jsf(params_for(static_cast<int>(state.range(0)), 0.0));
  const tme::IterationConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(tme::extract_mode(jsa, 1, {}, cfg));
}
BENCHMARK(BM_ExtractFirstMode)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const auto jsa = tme::build_fiber_jsf(params_for(static_cast<int>(state.range(0)), 0.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tme::schmidt_decompose(jsa, tme::ModeRequest::first(3)));
  }
}
BENCHMARK(BM_Decompose)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
