// Serial references against the OpenMP kernels. Thread count follows
// BENTBOOK_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "bentbook/boolfn.hpp"
#include "bentbook/codebook.hpp"
#include "bentbook/extend.hpp"
#include "bentbook/search.hpp"

using namespace bentbook;

namespace {

TruthTable random_table(int n) {
  std::mt19937_64 rng(20240601);
  return TruthTable::from_function(n, [&](std::uint32_t) { return rng() & 1u; });
}

std::vector<Perm> base_set() { return {{1, 2, 3, 4}, {3, 2, 4, 1}, {3, 4, 1, 2}, {1, 3, 4, 2}, {4, 2, 1, 3}, {4, 1, 3, 2}}; }

CompatGraph is_graph(int n) {
  std::vector<Perm> v = enumerate_is(n);
  v.push_back(Perm::identity(n));
  return build_graph(v);
}

void BM_wht(benchmark::State& state) {
  const TruthTable f = random_table(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wht(f));
}
void BM_wht_serial(benchmark::State& state) {
  const TruthTable f = random_table(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(wht_serial(f));
}

void BM_enumerate_is(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_is(static_cast<int>(state.range(0))));
}
void BM_enumerate_is_serial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_is_serial(static_cast<int>(state.range(0))));
}

void BM_build_graph(benchmark::State& state) {
  std::vector<Perm> v = enumerate_is(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(v));
}
void BM_build_graph_serial(benchmark::State& state) {
  std::vector<Perm> v = enumerate_is(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_graph_serial(v));
}

void BM_maximal_cliques(benchmark::State& state) {
  const CompatGraph g = is_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(maximal_cliques(g, 8));
}
void BM_maximal_cliques_serial(benchmark::State& state) {
  const CompatGraph g = is_graph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(maximal_cliques_serial(g, 8));
}

void BM_verify_set(benchmark::State& state) {
  const auto set = self_extend(base_set(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_compatible_set(set, CheckRoute::Both));
}
void BM_verify_set_serial(benchmark::State& state) {
  const auto set = self_extend(base_set(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_compatible_set_serial(set, CheckRoute::Both));
}

void BM_coherence_direct(benchmark::State& state) {
  const Codebook cb = spreading_matrix(self_extend(base_set(), 2));
  for (auto _ : state) benchmark::DoNotOptimize(coherence_direct(cb));
}
void BM_coherence_direct_serial(benchmark::State& state) {
  const Codebook cb = spreading_matrix(self_extend(base_set(), 2));
  for (auto _ : state) benchmark::DoNotOptimize(coherence_direct_serial(cb));
}

}  // namespace

BENCHMARK(BM_wht)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_wht_serial)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_enumerate_is)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_enumerate_is_serial)->Arg(7)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_graph)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_build_graph_serial)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_maximal_cliques)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_maximal_cliques_serial)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_set)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_verify_set_serial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coherence_direct)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_coherence_direct_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
