#include <benchmark/benchmark.h>

#include "l2approx/groupring.hpp"
#include "l2approx/linalg.hpp"
#include "l2approx/quotient.hpp"

using namespace l2approx;

namespace {

GroupPtr z(std::size_t rank) { return std::make_shared<const Group>(Group::free_abelian(rank)); }

// 2 + t + t^-1 over Z, or the 4 + sum of generators and inverses over Z^2
GroupRingMatrix positive_form(std::size_t rank) {
  GroupRingMatrix a(z(rank), 1, 1);
  a.add(0, 0, GroupElement(std::vector<std::int64_t>(rank, 0)), Rational(static_cast<long>(2 * rank)));
  for (std::size_t i = 0; i < rank; ++i) {
    for (std::int64_t s : {-1, 1}) {
      std::vector<std::int64_t> e(rank, 0);
      e[i] = s;
      a.add(0, 0, GroupElement(e), 1);
    }
  }
  return a;
}

SymmetricComplex form(std::size_t rank) { return from_form(AlgebraicForm{positive_form(rank), 1}); }

}  // namespace

static void push_z(benchmark::State& state) {
  const GroupRingMatrix a = positive_form(1);
  const TowerLevel level(a.group(), 1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(a.push(level));
}
BENCHMARK(push_z)->RangeMultiplier(4)->Range(16, 1024);

static void inertia_circulant(benchmark::State& state) {
  const GroupRingMatrix a = positive_form(1);
  const QMatrix m = a.push(TowerLevel(a.group(), 1, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inertia(m));
}
BENCHMARK(inertia_circulant)->RangeMultiplier(4)->Range(16, 1024);

static void inertia_torus(benchmark::State& state) {
  const GroupRingMatrix a = positive_form(2);
  const QMatrix m = a.push(TowerLevel(a.group(), 1, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(inertia(m));
}
BENCHMARK(inertia_torus)->DenseRange(4, 16, 4);

static void rank_circulant(benchmark::State& state) {
  const GroupRingMatrix a = positive_form(1);
  const QMatrix m = a.push(TowerLevel(a.group(), 1, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(rank_circulant)->RangeMultiplier(4)->Range(16, 1024);

static void nullspace_circulant(benchmark::State& state) {
  const GroupRingMatrix a = positive_form(1);
  const QMatrix m = a.push(TowerLevel(a.group(), 1, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nullspace(m));
}
BENCHMARK(nullspace_circulant)->RangeMultiplier(4)->Range(16, 256);

static void snapshot_form(benchmark::State& state) {
  const SymmetricComplex s = form(1);
  const TowerLevel level(s.group(), 1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(snapshot(s, level));
}
BENCHMARK(snapshot_form)->RangeMultiplier(4)->Range(16, 256);

BENCHMARK_MAIN();
