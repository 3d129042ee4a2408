// Parallel kernels against the serial reference. Arg 0 runs the library
// kernel with the default OpenMP team, arg 1 runs cdyn::reference.

#include <benchmark/benchmark.h>

#include "cdyn/coding.hpp"
#include "cdyn/orbits.hpp"
#include "cdyn/reference.hpp"
#include "cdyn/words.hpp"

namespace {

using namespace cdyn;

const DynamicalSystem& collatz() {
  static const DynamicalSystem sys = make_system(SystemSpec::collatz());
  return sys;
}

void BM_Cycles(benchmark::State& state) {
  const bool serial = state.range(0) == 1;
  const auto len = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto r = serial ? reference::enumerate_cycles(collatz(), len) : enumerate_cycles(collatz(), len);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Cycles)->ArgsProduct({{0, 1}, {14, 18}})->Unit(benchmark::kMillisecond);

void BM_TucScan(benchmark::State& state) {
  const bool serial = state.range(0) == 1;
  const Window w = Window::range(1, state.range(1));
  for (auto _ : state) {
    auto r = serial ? reference::verify_tuc_window(collatz(), w, 1024) : verify_tuc_window(collatz(), w, 1024);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_TucScan)->ArgsProduct({{0, 1}, {500, 2000}})->Unit(benchmark::kMillisecond);

void BM_Minimality(benchmark::State& state) {
  const bool serial = state.range(0) == 1;
  const Window w = Window::range(1, state.range(1));
  for (auto _ : state) {
    auto r = serial ? reference::minimality_probe(collatz(), w, 10000) : minimality_probe(collatz(), w, 10000);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Minimality)->ArgsProduct({{0, 1}, {1000, 10000}})->Unit(benchmark::kMillisecond);

void BM_Uniqueness(benchmark::State& state) {
  const bool serial = state.range(0) == 1;
  const auto len = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto r = serial ? reference::check_uniqueness(collatz(), len) : check_uniqueness(collatz(), len);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Uniqueness)->ArgsProduct({{0, 1}, {10, 12}})->Unit(benchmark::kMillisecond);

void BM_Convergence(benchmark::State& state) {
  const bool serial = state.range(0) == 1;
  const auto n = static_cast<unsigned long>(state.range(1));
  for (auto _ : state) {
    auto r = serial ? reference::convergence_scan(collatz(), n, 1, 10000) : convergence_scan(collatz(), n, 1, 10000);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_Convergence)->ArgsProduct({{0, 1}, {10000, 100000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
