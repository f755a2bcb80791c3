#include <benchmark/benchmark.h>

#include <hermite_obs/control.hpp>
#include <hermite_obs/galerkin.hpp>
#include <hermite_obs/gram.hpp>
#include <hermite_obs/hermite_function.hpp>
#include <hermite_obs/matrix_exp.hpp>

using namespace hermite_obs;

static void BM_HermiteValues(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  double x = 0.3;
  for (auto _ : state) {
    auto v = hermite_values<double>(K, x);
    benchmark::DoNotOptimize(v.data());
    x += 1e-9;
  }
  state.SetComplexityN(K);
}
BENCHMARK(BM_HermiteValues)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);

static void BM_GramThick(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto omega = Region::make_periodic_thick(1, 1.0, 0.5, truncate_radius(N, 1, 2.0));
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(omega, N).matrix.data());
}
BENCHMARK(BM_GramThick)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_GramTwoDimensional(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto omega = Region::make_periodic_thick(2, 1.0, 0.5, truncate_radius(N, 2, 2.0));
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(omega, N).matrix.data());
}
BENCHMARK(BM_GramTwoDimensional)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SpectralConstant(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  PrecisionPolicy policy;
  policy.start_bits = static_cast<unsigned>(state.range(1));
  auto G = gram_matrix(Region::make_half_space(1, 0, 0.0, truncate_radius(N, 1, 2.0)), N);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_constant(G, policy).C);
}
BENCHMARK(BM_SpectralConstant)->Args({16, 53})->Args({16, 256})->Args({32, 256})->Unit(benchmark::kMillisecond);

static void BM_WeylQuantize(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  auto q = QuadraticSymbol::kramers_fokker_planck(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(weyl_quantize(q, N).A.data());
}
BENCHMARK(BM_WeylQuantize)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_Expm(benchmark::State& state) {
  auto A = weyl_quantize(QuadraticSymbol::kramers_fokker_planck(1.0), static_cast<int>(state.range(0))).A;
  for (auto _ : state) benchmark::DoNotOptimize(propagator<cplx>(A, 1.0).data());
}
BENCHMARK(BM_Expm)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_Observability(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  ControlProblem p;
  p.A = weyl_quantize(QuadraticSymbol::harmonic(1), N);
  p.omega = gram_matrix(Region::make_periodic_thick(1, 1.0, 0.5, truncate_radius(N, 1, 2.0)), N);
  for (auto _ : state) benchmark::DoNotOptimize(observability_constant(p).C_T);
}
BENCHMARK(BM_Observability)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
