// Kernel benchmarks: Dijkstra engines on one field, and the replication loop
// serial versus OpenMP.

#include <benchmark/benchmark.h>

#include "fpp/distribution.hpp"
#include "fpp/field.hpp"
#include "fpp/lattice.hpp"
#include "fpp/metric.hpp"
#include "fpp/oriented.hpp"
#include "fpp/shortest_path.hpp"

namespace {

const fpp::WeightDistribution& law() {
  static const fpp::WeightDistribution d = fpp::WeightDistribution::two_atom(0.8);
  return d;
}

void BM_Dijkstra(benchmark::State& state, fpp::Engine engine) {
  const fpp::BoxLattice lat(static_cast<int>(state.range(0)));
  const auto field = fpp::WeightField::sample(lat, law(), 42);
  fpp::SearchOptions so;
  so.engine = engine;
  fpp::DistanceField out;
  for (auto _ : state) {
    fpp::single_source(field, lat.id({0, 0}), so, out);
    benchmark::DoNotOptimize(out.dist.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * lat.num_sites()));
}
BENCHMARK_CAPTURE(BM_Dijkstra, bucket, fpp::Engine::bucket)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Dijkstra, heap, fpp::Engine::heap)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FieldSample(benchmark::State& state) {
  const fpp::BoxLattice lat(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto field = fpp::WeightField::sample(lat, law(), 7);
    benchmark::DoNotOptimize(field.stored().data());
  }
}
BENCHMARK(BM_FieldSample)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_PassageSamples(benchmark::State& state, bool parallel) {
  fpp::EstimateOptions opts;
  opts.parallel = parallel;
  for (auto _ : state) {
    auto s = fpp::passage_samples(law(), fpp::Direction{0.0}, {64}, 32, 5, opts);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK_CAPTURE(BM_PassageSamples, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_PassageSamples, openmp, true)->Unit(benchmark::kMillisecond);

void BM_OrientedSweep(benchmark::State& state) {
  const auto eta = fpp::EtaField::lazy(0.8, 3);
  const auto start = fpp::StartingSet::ray({0, 0}, 512);
  for (auto _ : state) {
    auto front = fpp::reachable_diagonal(eta, start, 256);
    benchmark::DoNotOptimize(front.count());
  }
}
BENCHMARK(BM_OrientedSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
