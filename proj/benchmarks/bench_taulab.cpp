#include <benchmark/benchmark.h>

#include <random>

#include "taulab/acceptance.hpp"
#include "taulab/airy.hpp"
#include "taulab/elliptic.hpp"
#include "taulab/fredholm.hpp"
#include "taulab/linsys.hpp"
#include "taulab/painleve.hpp"

using namespace taulab;

static void BM_Tau(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto sys = acceptance::random_scattering_system(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tau(sys, 0.5));
}
BENCHMARK(BM_Tau)->RangeMultiplier(2)->Range(2, 32);

static void BM_Lyapunov(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto n = static_cast<int>(state.range(0));
  const auto sys = acceptance::random_scattering_system(rng, n);
  const CMat M = sys.B() * sys.C();
  for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(sys.A(), M));
}
BENCHMARK(BM_Lyapunov)->RangeMultiplier(2)->Range(2, 64);

static void BM_NystromDet(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto sys = acceptance::random_scattering_system(rng, 4);
  const fredholm::ScalarSymbol phi = [&](double s) { return scattering(sys, s)(0, 0); };
  const auto grid = fredholm::make_grid(fredholm::truncation_for_system(sys, 0.5), static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto K = fredholm::hankel_operator(phi, 0.5, grid);
    benchmark::DoNotOptimize(fredholm::fredholm_det(K, 1.0));
  }
}
BENCHMARK(BM_NystromDet)->RangeMultiplier(2)->Range(16, 256);

static void BM_F2Determinant(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(airy::f2_determinant(-2.0));
}
BENCHMARK(BM_F2Determinant);

static void BM_HastingsMcLeod(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(painleve::PainleveSolution(-6.0));
}
BENCHMARK(BM_HastingsMcLeod)->Unit(benchmark::kMillisecond);

static void BM_ThetaDet(benchmark::State& state) {
  const auto sys = elliptic::build_theta_system(0.3, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(elliptic::tau_periodic(sys, 1.1));
}
BENCHMARK(BM_ThetaDet)->Arg(10)->Arg(20)->Arg(40);

BENCHMARK_MAIN();
