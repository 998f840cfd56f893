#include <benchmark/benchmark.h>

#include "benjamin/bourgain.hpp"
#include "benjamin/diagnostics.hpp"
#include "benjamin/evolution.hpp"
#include "benjamin/hum.hpp"
#include "benjamin/spectral_ops.hpp"

using namespace benjamin;

static void BM_NonlinearTerm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto u = random_field(n, 1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(nonlinear_term(u));
}
BENCHMARK(BM_NonlinearTerm)->RangeMultiplier(2)->Range(64, 1024);

// 100 ETDRK4 steps with K0 feedback, including the per-run coefficient setup.
static void BM_Steps(benchmark::State& state) {
  RunConfig cfg;
  cfg.N = static_cast<int>(state.range(0));
  cfg.feedback = DampingGGstar{};
  const Evolution evo(cfg);
  const auto u = random_field(cfg.N, 1, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(evo.run(u, 0.0, 1e-3, 1e-5, 100));
  state.SetItemsProcessed(100 * state.iterations());
}
BENCHMARK(BM_Steps)->RangeMultiplier(2)->Range(64, 512);

static void BM_AssembleLLambda(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = GainProfile::raised_cosine(n);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_L_lambda({1.0, 1.0}, g, {0.5, 0.0}, n));
}
BENCHMARK(BM_AssembleLLambda)->RangeMultiplier(2)->Range(32, 256)->Unit(benchmark::kMillisecond);

static void BM_HumSynthesis(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = GainProfile::raised_cosine(n);
  const PhysicalParams p{0.5, 0.0};
  const auto u0 = random_field(n, 1, 1.0);
  const auto u1 = random_field(n, 2, 1.0);
  for (auto _ : state) {
    const HumSynthesizer hum(assemble_gramian(1.0, g, p, n), g, p, 1.0);
    benchmark::DoNotOptimize(hum.adjoint_state(u0, u1));
  }
}
BENCHMARK(BM_HumSynthesis)->RangeMultiplier(2)->Range(32, 128)->Unit(benchmark::kMillisecond);

static void BM_FreeWaveL4(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const PhysicalParams p{0.5, 0.0};
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(l4_embedding_ratio(random_free_wave(n, seed++, p), p));
}
BENCHMARK(BM_FreeWaveL4)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
