// Serial vs OpenMP grid scans, plus the two table recurrences.
#include <benchmark/benchmark.h>

#include "poissonk/pmf.hpp"
#include "poissonk/scan.hpp"

namespace {

using namespace poissonk;

std::vector<ScanPoint> mode_grid(int k_max) {
  LambdaGrid grid{0.01L, 3.0L, 30, Spacing::kGeometric};
  return make_scan_points(1, k_max, LambdaRule::kGrid, grid);
}

void BM_ScanSerial(benchmark::State& state) {
  const auto points = mode_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scan_serial(points));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}

void BM_ScanParallel(benchmark::State& state) {
  const auto points = mode_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scan_parallel(points));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(points.size()));
}

void BM_EmpiricalSerial(benchmark::State& state) {
  const auto points = make_scan_points(2, static_cast<int>(state.range(0)), LambdaRule::kEmpirical);
  for (auto _ : state) benchmark::DoNotOptimize(scan_serial(points));
}

void BM_EmpiricalParallel(benchmark::State& state) {
  const auto points = make_scan_points(2, static_cast<int>(state.range(0)), LambdaRule::kEmpirical);
  for (auto _ : state) benchmark::DoNotOptimize(scan_parallel(points));
}

void BM_TableForward(benchmark::State& state) {
  const Params params(static_cast<int>(state.range(0)), 0.6026076L);
  for (auto _ : state) benchmark::DoNotOptimize(build_table(params, 200));
}

void BM_TableFourTermExact(benchmark::State& state) {
  const Params params(static_cast<int>(state.range(0)), 0.6026076L);
  for (auto _ : state) benchmark::DoNotOptimize(build_table_km(params, 200));
}

}  // namespace

BENCHMARK(BM_ScanSerial)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanParallel)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EmpiricalSerial)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EmpiricalParallel)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TableForward)->Arg(2)->Arg(10);
BENCHMARK(BM_TableFourTermExact)->Arg(2)->Arg(10)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
