#include <benchmark/benchmark.h>

#include "cayspec/complex.hpp"
#include "cayspec/experiments.hpp"
#include "cayspec/f2_expansion.hpp"
#include "cayspec/fourier.hpp"
#include "cayspec/garland.hpp"
#include "cayspec/homology.hpp"
#include "cayspec/spectral.hpp"

using namespace cayspec;

namespace {

GroupPtr cyclic(std::size_t n) { return std::make_shared<const GroupTable>(make_cyclic(n)); }

void BM_BuildCoboundaries(benchmark::State& state) {
  const auto G = cyclic(static_cast<std::size_t>(state.range(0)));
  const auto A = sample_subset(*G, G->order() / 2, 1);
  for (auto _ : state) {
    const auto X = build_complex(G, 2, A);
    benchmark::DoNotOptimize(X.coboundary(1).nnz());
  }
}
BENCHMARK(BM_BuildCoboundaries)->Arg(10)->Arg(20)->Arg(40);

void BM_GapDense(benchmark::State& state) {
  const auto G = cyclic(static_cast<std::size_t>(state.range(0)));
  const auto X = build_complex(G, 2, sample_subset(*G, G->order() / 2, 2));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(X, 1, 1e-9, GapMethod::Dense).gap);
}
BENCHMARK(BM_GapDense)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_GapLanczos(benchmark::State& state) {
  const auto G = cyclic(static_cast<std::size_t>(state.range(0)));
  const auto X = build_complex(G, 2, sample_subset(*G, G->order() / 2, 2));
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(X, 1, 1e-9, GapMethod::Iterative).gap);
}
BENCHMARK(BM_GapLanczos)->Arg(8)->Arg(16)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_Nu(benchmark::State& state) {
  const auto G = make_cyclic(static_cast<std::size_t>(state.range(0)));
  const auto A = sample_subset(G, 20, 3);
  for (auto _ : state) benchmark::DoNotOptimize(nu(G, A).nu);
}
BENCHMARK(BM_Nu)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_Dsum(benchmark::State& state) {
  const auto G = make_symmetric(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dsum(G).dsum);
}
BENCHMARK(BM_Dsum)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_RankModP(benchmark::State& state) {
  const auto G = cyclic(static_cast<std::size_t>(state.range(0)));
  const auto X = build_complex(G, 2, sample_subset(*G, 3, 4));
  const auto& d = X.coboundary(1);
  for (auto _ : state) benchmark::DoNotOptimize(rank_mod_p(d));
}
BENCHMARK(BM_RankModP)->Arg(10)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_LambdaCA(benchmark::State& state) {
  const auto G = make_cyclic(static_cast<std::size_t>(state.range(0)));
  const auto A = sample_subset(G, G.order() / 3, 5);
  for (auto _ : state) benchmark::DoNotOptimize(lambda2_CA(G, A));
}
BENCHMARK(BM_LambdaCA)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_HConstant(benchmark::State& state) {
  const auto G = cyclic(static_cast<std::size_t>(state.range(0)));
  const auto X = build_complex(G, 1, sample_subset(*G, 2, 6));
  for (auto _ : state) benchmark::DoNotOptimize(h_constant(X, 0).num);
}
BENCHMARK(BM_HConstant)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
