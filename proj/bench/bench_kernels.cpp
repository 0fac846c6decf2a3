#include <benchmark/benchmark.h>

#include <random>

#include "tafkit/kernels.hpp"

using namespace tafkit;

namespace {

// Random strict order on n units: a DAG on a shuffled order with edge density p.
BitMatrix random_relation(std::size_t n, double p, bool closed) {
  std::mt19937_64 rng(n);
  std::bernoulli_distribution coin(p);
  BitMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (coin(rng)) m.set(i, j);
  if (closed) kernels::serial::transitive_closure(m);
  return m;
}

template <void (*F)(BitMatrix&)>
void closure(benchmark::State& st) {
  const auto base = random_relation(st.range(0), 4.0 / double(st.range(0)), false);
  for (auto _ : st) {
    auto m = base;
    F(m);
    benchmark::DoNotOptimize(m);
  }
}

template <BitMatrix (*F)(const BitMatrix&)>
void covering(benchmark::State& st) {
  const auto m = random_relation(st.range(0), 4.0 / double(st.range(0)), true);
  for (auto _ : st) benchmark::DoNotOptimize(F(m));
}

template <LengthTable (*F)(const BitMatrix&, const BitMatrix&)>
void lengths(benchmark::State& st) {
  const auto m = random_relation(st.range(0), 4.0 / double(st.range(0)), true);
  const auto c = kernels::serial::covering(m);
  for (auto _ : st) benchmark::DoNotOptimize(F(m, c));
}

}  // namespace

BENCHMARK(closure<kernels::serial::transitive_closure>)->Name("closure/serial")->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(closure<kernels::parallel::transitive_closure>)->Name("closure/parallel")->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(covering<kernels::serial::covering>)->Name("covering/serial")->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(covering<kernels::parallel::covering>)->Name("covering/parallel")->RangeMultiplier(2)->Range(64, 1024);
BENCHMARK(lengths<kernels::serial::longest_paths>)->Name("lengths/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(lengths<kernels::parallel::longest_paths>)->Name("lengths/parallel")->RangeMultiplier(2)->Range(64, 512);

BENCHMARK_MAIN();
