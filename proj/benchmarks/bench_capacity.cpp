#include <benchmark/benchmark.h>

#include "symcap/capacity.hpp"
#include "symcap/oracle2d.hpp"
#include "symcap/polytope.hpp"

namespace {

symcap::Polytope square() { return symcap::cube(2); }

void BM_EhzSquare(benchmark::State& state) {
  const auto p = square();
  for (auto _ : state) benchmark::DoNotOptimize(symcap::ehz(p).value);
}
BENCHMARK(BM_EhzSquare);

void BM_LrSquare(benchmark::State& state) {
  const auto p = square();
  for (auto _ : state) benchmark::DoNotOptimize(symcap::lr(p, 1, 0).value);
}
BENCHMARK(BM_LrSquare);

// Exhaustive 8! search on the 4D product, by worker count.
void BM_EhzProduct4d(benchmark::State& state) {
  const auto p = symcap::product(square(), square());
  symcap::SearchOptions opts;
  opts.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(symcap::ehz(p, opts).value);
}
BENCHMARK(BM_EhzProduct4d)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DenseSearchSquare(benchmark::State& state) {
  const auto p = square();
  symcap::DenseSearchOptions opts;
  opts.samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(symcap::dense_search(p, symcap::DenseSearchMode::ehz(), opts));
}
BENCHMARK(BM_DenseSearchSquare)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
