#include <gtest/gtest.h>

#include <cmath>

#include "congestion.h"
#include "hybridnet/error.h"
#include "hybridnet/nonsegregated.h"
#include "instances.h"

namespace hybridnet {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

// Equal infinities count as agreement.
::testing::AssertionResult same_lambda(double a, double b) {
  if (a == b || std::abs(a - b) <= 1e-7 * std::max(1.0, std::abs(b))) {
    return ::testing::AssertionSuccess();
  }
  return ::testing::AssertionFailure() << a << " vs " << b;
}

TEST(Tau, NamesRoundTrip) {
  for (Tau t : {Tau::kSS, Tau::kUS, Tau::kSN, Tau::kUN}) {
    EXPECT_EQ(parse_tau(tau_name(t)), t);
  }
  EXPECT_EQ(parse_tau("un"), Tau::kUN);
  EXPECT_FALSE(parse_tau("xx").has_value());
  EXPECT_TRUE(is_segregated(Tau::kUS));
  EXPECT_FALSE(is_splittable(Tau::kUN));
}

// s-a, x-y, b-t with only {a,x} and {y,b} as candidates: no single pair
// helps, both together open one unit.
TEST(SingleCommodity, GreedyMissesJointAugmentation) {
  HybridNetwork net = NetworkBuilder(6)
                          .add_static(0, 1, 1)
                          .add_static(2, 3, 1)
                          .add_static(4, 5, 1)
                          .add_reconfigurable(1, 2, 1, 1)
                          .add_reconfigurable(3, 4, 1, 1)
                          .build();
  DemandMatrix d(6);
  d.set(0, 5, 1);
  EXPECT_TRUE(greedy_augmenting_matching(net, d).empty());
  SingleCommodityResult r = solve_single_commodity_uniform(net, d);
  EXPECT_TRUE(r.proven_optimal);
  EXPECT_EQ(r.max_flow_units, 1);
  EXPECT_EQ(r.matching, Matching({{1, 2}, {3, 4}}));
  EXPECT_NEAR(r.report.lambda, 1, 1e-12);
}

TEST(SingleCommodity, MatchesMaxFlowEnumeration) {
  for (int i = 0; i < 40; ++i) {
    std::uint64_t seed = derive_seed(601, i);
    Rng rng(seed);
    auto [n, k] = testing_support::pick_shape(rng, 4, 8, {2, 3});
    const double c = 1 + static_cast<double>(rng.uniform_int(3));
    HybridNetwork net = testing_support::uniform_network(n, k, seed, c);
    NodeId s = static_cast<NodeId>(rng.uniform_int(n));
    NodeId t = static_cast<NodeId>((s + 1 + rng.uniform_int(n - 1)) % n);
    DemandMatrix d(n);
    const double demand = 1 + static_cast<double>(rng.uniform_int(10));
    d.set(s, t, demand);

    double best = 0;
    oracle::for_each_matching(oracle::usable_pairs(net), [&](const std::vector<NodePair>& m) {
      best = std::max(best, oracle::matching_max_flow(net, Matching(m), s, t));
    });
    SingleCommodityResult r = solve_single_commodity_uniform(net, d);
    ASSERT_TRUE(r.proven_optimal);
    EXPECT_NEAR(r.max_flow_units * c, best, 1e-9) << seed;
    EXPECT_NEAR(r.report.lambda, demand / best, 1e-9) << seed;
    auto check = oracle::check_flow(net, d, r.matching, r.flow);
    EXPECT_TRUE(check.covers && check.allowed_links);
    EXPECT_LE(check.demand, 1e-9);
  }
}

TEST(SingleCommodity, Preconditions) {
  HybridNetwork uniform = testing_support::uniform_network(6, 2, 3);
  DemandMatrix two(6);
  two.set(0, 1, 1);
  two.set(2, 3, 1);
  EXPECT_EQ(code_of([&] { solve_single_commodity_uniform(uniform, two); }),
            ErrorCode::kNotSingleCommodity);
  HybridNetwork mixed = testing_support::random_network(6, 2, 3, 3, false);
  DemandMatrix one(6);
  one.set(0, 1, 1);
  EXPECT_EQ(code_of([&] { solve_single_commodity_uniform(mixed, one); }),
            ErrorCode::kNonUniformCapacities);
}

TEST(RouteMatching, AgreesWithOraclesForSplittableModes) {
  for (int i = 0; i < 30; ++i) {
    std::uint64_t seed = derive_seed(602, i);
    Rng rng(seed);
    auto [n, k] = testing_support::pick_shape(rng, 4, 9, {2, 3, 4});
    auto inst = testing_support::random_instance(n, k, 4, seed);
    std::vector<NodePair> pairs;
    std::vector<bool> used(n, false);
    for (NodePair p : oracle::usable_pairs(inst.net)) {
      if (used[p.u] || used[p.v] || rng.uniform_int(2) == 0) continue;
      used[p.u] = used[p.v] = true;
      pairs.push_back(p);
    }
    Matching m(pairs);
    Routing ss = route_matching(inst.net, inst.demands, m, {Tau::kSS});
    Routing sn = route_matching(inst.net, inst.demands, m, {Tau::kSN});
    EXPECT_TRUE(same_lambda(ss.report.lambda, oracle::segregated_lambda(inst.net, inst.demands, m)))
        << seed;
    EXPECT_TRUE(same_lambda(sn.report.lambda, oracle::shared_lambda(inst.net, inst.demands, m)))
        << seed;
    EXPECT_LE(sn.report.lambda, ss.report.lambda + 1e-9);
    auto cs = oracle::check_flow(inst.net, inst.demands, m, ss.flow);
    EXPECT_TRUE(cs.segregated && cs.covers && cs.allowed_links);
    auto cn = oracle::check_flow(inst.net, inst.demands, m, sn.flow);
    EXPECT_TRUE(cn.covers && cn.allowed_links);
    EXPECT_LE(cn.conservation, 1e-7);
  }
}

TEST(RouteMatching, UnsplittableModesUseOnePathEach) {
  for (int i = 0; i < 20; ++i) {
    std::uint64_t seed = derive_seed(603, i);
    auto inst = testing_support::random_instance(8, 3, 5, seed);
    Matching m({{0, 1}, {2, 3}});
    for (Tau tau : {Tau::kUS, Tau::kUN}) {
      for (int limit : {0, 1, 3}) {
        EvalSpec spec{tau, limit, 5, seed};
        Routing r = route_matching(inst.net, inst.demands, m, spec);
        auto check = oracle::check_flow(inst.net, inst.demands, m, r.flow);
        EXPECT_TRUE(check.single_path && check.covers && check.allowed_links)
            << seed << " " << tau_name(tau) << " " << limit;
        if (tau == Tau::kUS) EXPECT_TRUE(check.segregated);
        Routing again = route_matching(inst.net, inst.demands, m, spec);
        EXPECT_EQ(r.report.lambda, again.report.lambda);
      }
    }
  }
  auto inst = testing_support::random_instance(6, 2, 2, 1);
  EXPECT_EQ(code_of([&] {
              route_matching(inst.net, inst.demands, Matching{}, {Tau::kSS, -1});
            }),
            ErrorCode::kInvalidArgument);
}

TEST(BruteForce, MatchesExhaustiveOraclesForSplittableModes) {
  for (int i = 0; i < 25; ++i) {
    std::uint64_t seed = derive_seed(604, i);
    Rng rng(seed);
    auto [n, k] = testing_support::pick_shape(rng, 4, 6, {2, 3});
    auto inst = testing_support::random_instance(n, k, 3, seed);
    ExactResult ss = brute_force_opt(inst.net, inst.demands, {Tau::kSS});
    ExactResult sn = brute_force_opt(inst.net, inst.demands, {Tau::kSN});
    EXPECT_NEAR(ss.report.lambda, oracle::exhaustive_segregated_opt(inst.net, inst.demands),
                1e-7)
        << seed;
    EXPECT_NEAR(sn.report.lambda, oracle::exhaustive_shared_opt(inst.net, inst.demands), 1e-7)
        << seed;
    ExactResult us = brute_force_opt(inst.net, inst.demands, {Tau::kUS});
    ExactResult un = brute_force_opt(inst.net, inst.demands, {Tau::kUN});
    EXPECT_GE(us.report.lambda, ss.report.lambda - 1e-9);
    EXPECT_GE(un.report.lambda, sn.report.lambda - 1e-9);
    EXPECT_LE(un.report.lambda, us.report.lambda + 1e-9);
    EXPECT_TRUE(oracle::check_flow(inst.net, inst.demands, us.matching, us.flow).single_path);
  }
}

TEST(BruteForce, RefusesLargeNetworks) {
  auto inst = testing_support::random_instance(10, 3, 2, 5);
  EXPECT_EQ(code_of([&] { brute_force_opt(inst.net, inst.demands, {Tau::kSS}); }),
            ErrorCode::kInstanceTooLarge);
}

}  // namespace
}  // namespace hybridnet
