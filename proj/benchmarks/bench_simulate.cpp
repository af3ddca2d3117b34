#include <benchmark/benchmark.h>

#include <vector>

#include "autocat/network.hpp"
#include "autocat/rng.hpp"
#include "autocat/simulate.hpp"

namespace {

using namespace autocat;

void BM_DirectMethodStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const ReactionNetwork net = create_network(d, Topology::kFullSymmetric, 0.05, 0.2, 0.01);
  DirectMethod method(net);
  CounterRng rng(1, 0);
  std::vector<Count> x(static_cast<std::size_t>(d), 20);
  for (auto _ : state) benchmark::DoNotOptimize(method.step(x, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DirectMethodStep)->Arg(2)->Arg(4)->Arg(8);

void BM_EndState(benchmark::State& state) {
  const ReactionNetwork net = create_network(2, Topology::kFullSymmetric, 0.05, 0.2, 0.01);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_end_state(net, State{20, 20}, 50.0, ++seed));
}
BENCHMARK(BM_EndState);

}  // namespace
