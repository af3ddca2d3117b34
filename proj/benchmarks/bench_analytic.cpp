#include <benchmark/benchmark.h>

#include "autocat/analytic.hpp"
#include "autocat/lattice.hpp"

namespace {

using namespace autocat;

void BM_StationaryPmfSimplex(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Count n = 20;
  const ReactionNetwork net = create_network(d, Topology::kFullSymmetric, 0.05, 0.2, 0.03);
  const MixtureStationary law = stationary_law(net);
  for (auto _ : state) {
    double sum = 0.0;
    for_each_simplex_point(d, n, [&](std::span<const Count> a) { sum += stationary_pmf(law, a); });
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(simplex_size(d, n)));
}
BENCHMARK(BM_StationaryPmfSimplex)->Arg(2)->Arg(3)->Arg(5);

void BM_AnalyticMoments(benchmark::State& state) {
  const ReactionNetwork net = create_network(3, Topology::kFullSymmetric, 0.05, 0.2, 0.01);
  const MixtureStationary law = stationary_law(net);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_moments(law, 1.0));
}
BENCHMARK(BM_AnalyticMoments);

}  // namespace
