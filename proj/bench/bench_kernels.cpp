// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "slve/constitutive.hpp"
#include "slve/kernels.hpp"

namespace {

namespace k = slve::kernels;

struct Fields {
  explicit Fields(std::size_t n) : v(n), eps(n), T(n), dv(n), deps(n), dT(n) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
      v[i] = 0.1 * std::sin(x);
      T[i] = 0.3 * std::cos(2.0 * x);
      eps[i] = T[i] / (1.0 + std::abs(T[i]));
    }
  }
  std::vector<double> v, eps, T, dv, deps, dT;
};

template <bool Parallel>
void BM_first_derivative(benchmark::State& state) {
  Fields f(static_cast<std::size_t>(state.range(0)));
  const double h = 2.0 * M_PI / static_cast<double>(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel) k::omp::first_derivative(f.T, h, true, f.dT);
    else k::serial::first_derivative(f.T, h, true, f.dT);
    benchmark::DoNotOptimize(f.dT.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_stress_rate_rhs(benchmark::State& state) {
  Fields f(static_cast<std::size_t>(state.range(0)));
  const auto h = slve::ConstitutiveFunction::saturating(1.0, 1.0);
  const k::RhsParams p{2.0 * M_PI / static_cast<double>(state.range(0)), true, 1.0, 1.0};
  for (auto _ : state) {
    if constexpr (Parallel) k::omp::stress_rate_rhs(f.v, f.eps, f.T, h, p, f.dv, f.deps, f.dT);
    else k::serial::stress_rate_rhs(f.v, f.eps, f.T, h, p, f.dv, f.deps, f.dT);
    benchmark::DoNotOptimize(f.dT.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_reconstruct_stress(benchmark::State& state) {
  Fields f(static_cast<std::size_t>(state.range(0)));
  const auto g = slve::ConstitutiveFunction::saturating(1.0, 1.0);
  const k::RhsParams p{2.0 * M_PI / static_cast<double>(state.range(0)), true, 1.0, 0.5};
  for (auto _ : state) {
    if constexpr (Parallel) k::omp::reconstruct_stress(f.v, f.eps, g, p, f.T);
    else k::serial::reconstruct_stress(f.v, f.eps, g, p, f.T);
    benchmark::DoNotOptimize(f.T.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_first_derivative<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_first_derivative<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_stress_rate_rhs<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_stress_rate_rhs<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 19);
BENCHMARK(BM_reconstruct_stress<false>)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_reconstruct_stress<true>)->RangeMultiplier(8)->Range(1 << 10, 1 << 16);

BENCHMARK_MAIN();
