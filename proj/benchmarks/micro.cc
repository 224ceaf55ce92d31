#include <benchmark/benchmark.h>

#include "hybridnet/baselines.h"
#include "hybridnet/lp_engine.h"
#include "hybridnet/paths.h"
#include "hybridnet/segregated.h"
#include "hybridnet/workloads.h"

namespace {

using namespace hybridnet;

Instance workload(int n, int k, double rate) {
  WorkloadConfig config{n, k, 17};
  config.demand_model = PfabricModel{rate};
  return generate_instance(config);
}

void BM_RelaxationCompact(benchmark::State& state) {
  Instance inst = workload(static_cast<int>(state.range(0)), 4, 60);
  for (auto _ : state) {
    LpSolution sol = solve_lp(inst.net, build_mcrn_lp(inst.net, inst.demands));
    benchmark::DoNotOptimize(sol.lambda_opt);
  }
  state.counters["commodities"] = static_cast<double>(inst.demands.size());
}
BENCHMARK(BM_RelaxationCompact)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_SolveSsPathLimited(benchmark::State& state) {
  Instance inst = workload(static_cast<int>(state.range(0)), 4, 300);
  SegregatedOptions options;
  options.path_limit = 3;
  for (auto _ : state) {
    RoundedSolution s = solve_ss(inst.net, inst.demands, options);
    benchmark::DoNotOptimize(s.lambda);
  }
}
BENCHMARK(BM_SolveSsPathLimited)->Arg(16)->Arg(24)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_MaxWeightMatching(benchmark::State& state) {
  Instance inst = workload(static_cast<int>(state.range(0)), 4, 2000);
  for (auto _ : state) {
    Matching m = max_weight_matching(inst.net, inst.demands);
    benchmark::DoNotOptimize(m.size());
  }
}
BENCHMARK(BM_MaxWeightMatching)->Arg(32)->Arg(64)->Arg(128);

void BM_YenKShortest(benchmark::State& state) {
  HybridNetwork net = gen_k_regular(static_cast<int>(state.range(0)), 4, 3);
  RoutingGraph graph = RoutingGraph::static_only(net);
  const NodeId far = static_cast<NodeId>(state.range(0) - 1);
  for (auto _ : state) {
    auto paths = graph.k_shortest_paths(0, far, 8);
    benchmark::DoNotOptimize(paths.size());
  }
}
BENCHMARK(BM_YenKShortest)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
