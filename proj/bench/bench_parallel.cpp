// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "fibra/fibered.hpp"
#include "fibra/group.hpp"
#include "fibra/sweep.hpp"
#include "support/instances.hpp"

using namespace fibra;
namespace t = fibra::testing;

namespace {

ExecPolicy policy(const benchmark::State& state) {
  return state.range(0) == 0 ? ExecPolicy::serial : ExecPolicy::parallel;
}

void BM_continuity_sweep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(continuity_sweep(n, 3, policy(state)));
}
BENCHMARK(BM_continuity_sweep)->ArgsProduct({{0, 1}, {2, 3}})->Unit(benchmark::kMillisecond);

/// Z/n rotating every fiber {e0..e(n-1)} over `points` base points.
TstarRepresentation rotation(std::size_t n, std::size_t points) {
  const FinSet base = t::labels("m", points);
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t e = 0; e < n; ++e) table[g][e] = (e + g) % n;
  return TstarRepresentation(FiberedGroup{base, cyclic_group(n)},
                             Bundle("E", base, std::vector<FinSet>(points, t::labels("e", n))),
                             std::vector(points, table));
}

// Z/3 on 10 base points: 3^10 candidate sections.
void BM_little_group(benchmark::State& state) {
  const auto rep = rotation(3, 10);
  const Section h{std::vector<std::size_t>(10, 0)};
  for (auto _ : state) benchmark::DoNotOptimize(little_group(rep, h, kDefaultMaxEnum, policy(state)));
}
BENCHMARK(BM_little_group)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// 64 sections on each side.
void BM_sections_correspondence(benchmark::State& state) {
  t::Rng rng(11);
  const Bundle a("A", t::labels("m", 6), std::vector<FinSet>(6, t::labels("e", 2)));
  const auto f = t::random_reduced(rng, a, a, true, 0.7);
  for (auto _ : state)
    benchmark::DoNotOptimize(sections_correspondence(f, kDefaultMaxEnum, policy(state)));
}
BENCHMARK(BM_sections_correspondence)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_orbit_equivalence(benchmark::State& state) {
  t::Rng rng(13);
  const auto rep = t::random_cyclic_rep(rng, 6, 64, 64, 10);
  for (auto _ : state) benchmark::DoNotOptimize(orbit_equivalence(rep, policy(state)));
}
BENCHMARK(BM_orbit_equivalence)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
