#include <benchmark/benchmark.h>

#include "autocat/analytic.hpp"
#include "autocat/verify.hpp"

namespace {

using namespace autocat;

void BM_TruncatedSolve(benchmark::State& state) {
  const Count n = state.range(0);
  const ReactionNetwork net = create_network(2, Topology::kFullSymmetric, 0.05, 0.2, 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(truncated_stationary_solve(net, n));
}
// Dense path, then the iterative path.
BENCHMARK(BM_TruncatedSolve)->Arg(40)->Arg(84)->Unit(benchmark::kMillisecond);

void BM_MasterEquationSweep(benchmark::State& state) {
  const ReactionNetwork net = create_network(4, Topology::kFullSymmetric, 0.07, 0.1, 0.03);
  const MixtureStationary law = stationary_law(net);
  for (auto _ : state) benchmark::DoNotOptimize(master_equation_sweep(net, law.conditional, 0, 20));
}
BENCHMARK(BM_MasterEquationSweep)->Unit(benchmark::kMillisecond);

}  // namespace
