#include <benchmark/benchmark.h>

#include "pairprod/oracle.hpp"
#include "pairprod/propagator.hpp"
#include "pairprod/scattering.hpp"

using namespace pairprod;

namespace {

const FieldConfig kField(0.2, 98.4);
const NucleiConfig kTwo = nuclei_preset(2, 10.0, 0.8);

void BM_StepOperator(benchmark::State& state) {
  double x = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_operator(20.0, x, x - 1e-3, kField));
    x = x > -90.0 ? x - 1e-3 : 10.0;
  }
}
BENCHMARK(BM_StepOperator);

void BM_Compose(benchmark::State& state) {
  const auto acc = state.range(0) == 0 ? Accumulation::Extended : Accumulation::Compensated;
  const PropagationGrid grid = build_grid(kField, kTwo, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(compose_propagator(20.0, grid, kField, kTwo, acc));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.intervals()));
  state.SetLabel(state.range(0) == 0 ? "extended" : "compensated");
}
BENCHMARK(BM_Compose)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Scatter(benchmark::State& state) {
  const PropagationGrid grid = build_grid(kField, kTwo, 2e-3);
  for (auto _ : state) benchmark::DoNotOptimize(scatter(19.5, grid, kField, kTwo));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.intervals()));
}
BENCHMARK(BM_Scatter)->Unit(benchmark::kMillisecond);

void BM_PcfU(benchmark::State& state) {
  const double r = static_cast<double>(state.range(0));
  const Complex z = r * Complex{0.6, -0.8};
  for (auto _ : state) benchmark::DoNotOptimize(oracle::pcf_u_eval({-0.5, 2.5}, z));
}
BENCHMARK(BM_PcfU)->Arg(5)->Arg(20)->Arg(60)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
