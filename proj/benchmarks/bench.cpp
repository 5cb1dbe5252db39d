#include <benchmark/benchmark.h>

#include "udgcds/coverage.hpp"
#include "udgcds/geometry.hpp"
#include "udgcds/rgg.hpp"
#include "udgcds/rule2.hpp"

namespace {

using namespace udgcds;

void BM_BuildUdg(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const geometry::SquareRegion sq(rgg::ell_sqrt(n));
  const auto pts = rgg::sample_points(n, sq, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rgg::UnitDiskGraph::build(pts, sq));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildUdg)->Arg(1000)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Prune(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = rgg::random_udg(n, geometry::SquareRegion(rgg::ell_sqrt(n)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(rule2::prune(g, 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Prune)->Arg(1000)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_BruteForcePrune(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = rgg::random_udg(n, geometry::SquareRegion(rgg::ell_sqrt(n)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(rule2::brute_force_prune(g));
}
BENCHMARK(BM_BruteForcePrune)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_TripleIntersection(benchmark::State& state) {
  Rng rng(3);
  std::vector<geometry::Point2D> pts(3 * 1024);
  for (auto& p : pts) p = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geometry::triple_disk_intersection_area(pts[k], pts[k + 1], pts[k + 2]));
    k = (k + 3) % pts.size();
  }
}
BENCHMARK(BM_TripleIntersection);

void BM_TruncatedDiskArea(benchmark::State& state) {
  const geometry::SquareRegion sq(3.0);
  Rng rng(4);
  std::vector<geometry::Point2D> pts(1024);
  for (auto& p : pts) p = {rng.uniform(0, 3), rng.uniform(0, 3)};
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geometry::truncated_disk_area(pts[k], sq));
    k = (k + 1) % pts.size();
  }
}
BENCHMARK(BM_TruncatedDiskArea);

void BM_LocalCoverageTrial(benchmark::State& state) {
  const auto b = static_cast<std::size_t>(state.range(0));
  const geometry::SquareRegion sq(10.0);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto s = coverage::sample_colored({5, 5}, sq, b, b, seed++);
    benchmark::DoNotOptimize(coverage::blue_pair_dominates(s));
    benchmark::DoNotOptimize(coverage::sector_stats(s));
  }
}
BENCHMARK(BM_LocalCoverageTrial)->Arg(1000)->Arg(100'000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
