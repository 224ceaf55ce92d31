#include <gtest/gtest.h>

#include "congestion.h"
#include "hybridnet/error.h"
#include "hybridnet/rounding.h"
#include "hybridnet/segregated.h"
#include "instances.h"

namespace hybridnet {
namespace {

HybridNetwork path_abc(double reconfig = 1) {
  return NetworkBuilder(3)
      .add_static(0, 1, 1)
      .add_static(1, 2, 1)
      .complete_reconfigurable(reconfig)
      .build();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

TEST(IntegralityGap, PathInstanceLosesFactorTwo) {
  HybridNetwork net = path_abc();
  DemandMatrix d(3);
  d.set(0, 2, 1);
  RoundedSolution s = solve_ss(net, d);
  EXPECT_NEAR(s.lp_lower_bound, 0.5, 1e-9);
  EXPECT_NEAR(s.lambda, 1, 1e-9);
  EXPECT_NEAR(oracle::exhaustive_segregated_opt(net, d), 1, 1e-9);
}

TEST(RoundMatching, KeepsStrictMajorityAndResolvesNoise) {
  LpSolution sol;
  sol.z[NodePair::of(0, 1)] = 0.6;
  sol.z[NodePair::of(1, 2)] = 0.7;
  sol.z[NodePair::of(3, 4)] = 0.5;
  sol.z[NodePair::of(5, 6)] = 0.9;
  Matching m = round_matching(sol);
  EXPECT_EQ(m.size(), 2u);
  EXPECT_TRUE(m.contains(1, 2));
  EXPECT_TRUE(m.contains(5, 6));
  EXPECT_FALSE(m.contains(3, 4));
}

TEST(Rescale, UnmatchedFlowIsStretchedToFullDemand) {
  HybridNetwork net = path_abc();
  DemandMatrix d(3);
  d.set(0, 2, 1);
  LpSolution sol = solve_lp(net, build_mcrn_lp(net, d));
  ASSERT_TRUE(sol.optimal());
  Flow f = rescale_flows(net, sol, Matching{});
  ASSERT_EQ(f.commodities.size(), 1u);
  EXPECT_NEAR(f.commodities[0].link_flow.at(0), 1, 1e-9);
  EXPECT_NEAR(f.commodities[0].link_flow.at(2), 1, 1e-9);

  Flow direct = rescale_flows(net, sol, Matching({{0, 2}}));
  LinkId ac = net.reconfigurable_link(0, 2);
  EXPECT_NEAR(direct.commodities[0].link_flow.at(ac), 1, 1e-12);
  EXPECT_EQ(direct.commodities[0].link_flow.size(), 1u);

  LpSolution saturated = sol;
  saturated.z[NodePair::of(0, 2)] = 1;
  EXPECT_EQ(code_of([&] { rescale_flows(net, saturated, Matching{}); }),
            ErrorCode::kDivisionGuard);
}

TEST(SolveSS, ValidAndWithinTwiceTheBound) {
  for (int i = 0; i < 40; ++i) {
    std::uint64_t seed = derive_seed(501, i);
    Rng rng(seed);
    auto [n, k] = testing_support::pick_shape(rng, 4, 10, {2, 3, 4});
    auto inst = testing_support::random_instance(n, k, 2 + static_cast<int>(rng.uniform_int(6)),
                                                 seed);
    RoundedSolution s = solve_ss(inst.net, inst.demands);
    auto check = oracle::check_flow(inst.net, inst.demands, s.matching, s.flow);
    EXPECT_LE(check.conservation, 1e-7) << seed;
    EXPECT_LE(check.demand, 1e-7) << seed;
    EXPECT_TRUE(check.covers && check.allowed_links && check.segregated) << seed;
    EXPECT_LE(s.lambda, 2 * s.lp_lower_bound * (1 + 1e-6) + 1e-9) << seed;
    // The matching's own best routing can only be better.
    EXPECT_GE(s.lambda, oracle::segregated_lambda(inst.net, inst.demands, s.matching) - 1e-7);
    for (NodePair p : s.matching.pairs()) {
      EXPECT_TRUE(inst.demands.at(p.u, p.v) > 0 || inst.demands.at(p.v, p.u) > 0);
    }
  }
}

TEST(SolveSS, EmptyDemand) {
  RoundedSolution s = solve_ss(path_abc(), DemandMatrix(3));
  EXPECT_EQ(s.lambda, 0);
  EXPECT_TRUE(s.matching.empty());
}

TEST(SolveUS, SinglePathSegregatedAndDeterministic) {
  for (int i = 0; i < 20; ++i) {
    std::uint64_t seed = derive_seed(502, i);
    auto inst = testing_support::random_instance(8, 3, 6, seed);
    const int trials = default_trials(inst.net.num_static_directed());
    RoundedSolution a = solve_us(inst.net, inst.demands, trials, seed);
    RoundedSolution b = solve_us(inst.net, inst.demands, trials, seed);
    EXPECT_EQ(a.lambda, b.lambda);
    EXPECT_EQ(a.matching, b.matching);
    auto check = oracle::check_flow(inst.net, inst.demands, a.matching, a.flow);
    EXPECT_TRUE(check.single_path && check.segregated && check.covers) << seed;
    EXPECT_LE(check.demand, 1e-9);
    EXPECT_GE(a.lambda, a.lp_lower_bound - 1e-9);
  }
  EXPECT_EQ(code_of([] {
              DemandMatrix d(3);
              d.set(0, 2, 1);
              solve_us(path_abc(), d, 0, 1);
            }),
            ErrorCode::kInvalidArgument);
}

TEST(DefaultTrials, LogarithmicInLinkCount) {
  EXPECT_EQ(default_trials(0), 4);
  EXPECT_EQ(default_trials(2), 4);
  EXPECT_EQ(default_trials(3), 5);
  EXPECT_EQ(default_trials(1024), 13);
  EXPECT_EQ(default_trials(1025), 14);
}

TEST(SingleSource, MatchesExhaustiveSearch) {
  for (int i = 0; i < 40; ++i) {
    std::uint64_t seed = derive_seed(503, i);
    Rng rng(seed);
    auto [n, k] = testing_support::pick_shape(rng, 4, 9, {2, 3, 4});
    HybridNetwork net = testing_support::random_network(n, k, seed);
    DemandMatrix d(n);
    const NodeId hub = static_cast<NodeId>(rng.uniform_int(n));
    const bool outward = rng.uniform_int(2) == 0;
    for (NodeId v = 0; v < n; ++v) {
      if (v == hub || rng.uniform_int(2) == 0) continue;
      double amount = 1 + static_cast<double>(rng.uniform_int(9));
      outward ? d.set(hub, v, amount) : d.set(v, hub, amount);
    }
    if (d.empty()) continue;
    RoundedSolution s = solve_single_source_ss(net, d);
    EXPECT_NEAR(s.lambda, oracle::exhaustive_segregated_opt(net, d), 1e-7) << seed;
    EXPECT_LE(s.matching.size(), 1u);
    auto check = oracle::check_flow(net, d, s.matching, s.flow);
    EXPECT_TRUE(check.covers && check.segregated && check.allowed_links);
  }
}

TEST(SingleSource, RejectsGeneralDemands) {
  DemandMatrix d(4);
  d.set(0, 1, 1);
  d.set(2, 3, 1);
  HybridNetwork net = testing_support::uniform_network(4, 2, 1);
  EXPECT_EQ(code_of([&] { solve_single_source_ss(net, d); }), ErrorCode::kNotSingleSource);
}

}  // namespace
}  // namespace hybridnet
