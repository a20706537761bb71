// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "sosgibbs/kernels.hpp"

using namespace sosgibbs;
namespace kn = sosgibbs::kernels;

namespace {

const ModelParams& fm() {
  static const auto p = ModelParams::from_coupling(2, 2, -1.0, 2.0);
  return p;
}

template <bool Parallel>
void BM_TiGridScan(benchmark::State& state) {
  const auto axis = kn::log_grid(1e-6, 1e6, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto scan = Parallel ? kn::omp::ti_grid_scan(fm(), axis) : kn::serial::ti_grid_scan(fm(), axis);
    benchmark::DoNotOptimize(scan.cells.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

template <bool Parallel>
void BM_LogWeights(benchmark::State& state) {
  const auto ball = std::make_shared<const Ball>(2, 2);
  auto field = BoundaryLawField::constant(ball, ReducedLaw{0.3, -0.4});
  for (auto _ : state) {
    auto w = Parallel ? kn::omp::log_weights(field, 2, fm()) : kn::serial::log_weights(field, 2, fm());
    benchmark::DoNotOptimize(w.data());
  }
  state.SetItemsProcessed(state.iterations() * 59049);
}

template <bool Parallel>
void BM_AlternatingIterate(benchmark::State& state) {
  std::mt19937 gen(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<ReducedLaw> starts;
  for (int i = 0; i < state.range(0); ++i) starts.push_back(ReducedLaw{u(gen), u(gen)});
  const auto p = ModelParams::from_theta(200, 2, 1.07);
  for (auto _ : state) {
    auto l = Parallel ? kn::omp::alternating_iterate(p, starts, 200000, 1e-13)
                      : kn::serial::alternating_iterate(p, starts, 200000, 1e-13);
    benchmark::DoNotOptimize(l.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_TiGridScan<false>)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TiGridScan<true>)->Arg(200)->Arg(600)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_LogWeights<false>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LogWeights<true>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AlternatingIterate<false>)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AlternatingIterate<true>)->Arg(100)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
