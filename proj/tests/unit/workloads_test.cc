#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <queue>
#include <set>

#include "hybridnet/error.h"
#include "hybridnet/workloads.h"

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

bool connected(const HybridNetwork& net) {
  std::vector<bool> seen(net.num_nodes(), false);
  std::queue<NodeId> todo;
  todo.push(0);
  seen[0] = true;
  int count = 1;
  while (!todo.empty()) {
    NodeId v = todo.front();
    todo.pop();
    for (const auto& link : net.static_links()) {
      NodeId other = link.a == v ? link.b : link.b == v ? link.a : -1;
      if (other >= 0 && !seen[other]) {
        seen[other] = true;
        ++count;
        todo.push(other);
      }
    }
  }
  return count == net.num_nodes();
}

TEST(KRegular, SimpleConnectedAndRegular) {
  for (auto [n, k] : std::vector<std::pair<int, int>>{{4, 2}, {8, 3}, {10, 4}, {20, 6}, {31, 4}}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      HybridNetwork net = gen_k_regular(n, k, seed, 2);
      std::vector<int> degree(n, 0);
      std::set<std::pair<int, int>> edges;
      for (const auto& link : net.static_links()) {
        ASSERT_NE(link.a, link.b);
        EXPECT_TRUE(edges.insert(std::minmax(link.a, link.b)).second) << "parallel edge";
        ++degree[link.a];
        ++degree[link.b];
        EXPECT_EQ(link.capacity_forward, 2);
      }
      for (int v = 0; v < n; ++v) EXPECT_EQ(degree[v], k);
      EXPECT_TRUE(connected(net));
      EXPECT_TRUE(validate_network(net).ok());
      EXPECT_EQ(net.reconfigurable_links().size(), static_cast<std::size_t>(n * (n - 1) / 2));
    }
  }
}

TEST(KRegular, DeterministicPerSeed) {
  auto edges = [](const HybridNetwork& net) {
    std::vector<std::pair<int, int>> out;
    for (const auto& link : net.static_links()) out.push_back({link.a, link.b});
    return out;
  };
  EXPECT_EQ(edges(gen_k_regular(16, 4, 9)), edges(gen_k_regular(16, 4, 9)));
  EXPECT_NE(edges(gen_k_regular(16, 4, 9)), edges(gen_k_regular(16, 4, 10)));
}

TEST(KRegular, RejectsImpossibleDegrees) {
  EXPECT_EQ(code_of([] { gen_k_regular(5, 3, 1); }), ErrorCode::kInvalidDegree);
  EXPECT_EQ(code_of([] { gen_k_regular(4, 4, 1); }), ErrorCode::kInvalidDegree);
  EXPECT_EQ(code_of([] { gen_k_regular(4, 0, 1); }), ErrorCode::kInvalidDegree);
}

TEST(SizeDistribution, WebSearchIsAProperCdf) {
  SizeDistribution ws = SizeDistribution::web_search();
  ASSERT_FALSE(ws.cdf().empty());
  EXPECT_DOUBLE_EQ(ws.cdf().back().second, 1);
  for (std::size_t i = 1; i < ws.cdf().size(); ++i) {
    EXPECT_GE(ws.cdf()[i].first, ws.cdf()[i - 1].first);
    EXPECT_GE(ws.cdf()[i].second, ws.cdf()[i - 1].second);
  }
  Rng rng(5);
  double lo = ws.cdf().front().first;
  double hi = ws.cdf().back().first;
  for (int i = 0; i < 1000; ++i) {
    double s = ws.sample(rng);
    EXPECT_GE(s, lo);
    EXPECT_LE(s, hi);
  }
  EXPECT_EQ(code_of([] { SizeDistribution({{1, 0.5}, {2, 0.9}}); }), ErrorCode::kInvalidArgument);
}

TEST(SizeDistribution, SampleMeanConverges) {
  SizeDistribution d({{1, 0.25}, {3, 0.5}, {10, 1.0}});
  Rng rng(6);
  double total = 0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) total += d.sample(rng);
  EXPECT_NEAR(total / draws, d.mean(), 0.05 * d.mean());
  EXPECT_EQ(SizeDistribution::constant(4).sample(rng), 4);
}

TEST(Pfabric, DeterministicAndScalesWithRate) {
  SizeDistribution one = SizeDistribution::constant(1);
  DemandMatrix a = gen_pfabric_demands(10, 50, 1, one, 3);
  EXPECT_EQ(a, gen_pfabric_demands(10, 50, 1, one, 3));
  EXPECT_NE(a, gen_pfabric_demands(10, 50, 1, one, 4));
  // With unit sizes the total is the Poisson arrival count.
  double total = 0;
  const int runs = 200;
  for (int s = 0; s < runs; ++s) total += gen_pfabric_demands(10, 50, 2, one, s).total();
  EXPECT_NEAR(total / runs, 100, 3);
  for (auto [pair, value] : a.entries()) EXPECT_NE(pair.first, pair.second);
}

TEST(Trace, RemapsSparseIdsInOrder) {
  auto path = std::filesystem::temp_directory_path() / "hybridnet_trace_test.csv";
  {
    std::ofstream out(path);
    out << "i,j,demand\n20,5,1.5\n5,1000,2\n20,1000,0\n";
  }
  Trace t = load_trace(path);
  std::filesystem::remove(path);
  EXPECT_EQ(t.summary.num_nodes, 3);
  EXPECT_EQ(t.summary.original_ids, (std::vector<std::int64_t>{5, 20, 1000}));
  EXPECT_EQ(t.demands.at(1, 0), 1.5);
  EXPECT_EQ(t.demands.at(0, 2), 2);
  EXPECT_EQ(t.summary.nonzero, 2u);
  EXPECT_EQ(t.summary.total, 3.5);
  EXPECT_EQ(code_of([] { load_trace("/nonexistent/trace.csv"); }), ErrorCode::kIoError);
}

TEST(Instance, IndependentStreamsAndChecks) {
  WorkloadConfig config{12, 4, 77};
  Instance a = generate_instance(config);
  Instance b = generate_instance(config);
  EXPECT_EQ(a.demands, b.demands);
  EXPECT_EQ(a.net.num_nodes(), 12);
  config.default_capacity = 0;
  EXPECT_EQ(code_of([&] { generate_instance(config); }), ErrorCode::kInvalidArgument);
  config.default_capacity = 1;
  config.demand_model = PfabricModel{-1};
  EXPECT_EQ(code_of([&] { generate_instance(config); }), ErrorCode::kInvalidArgument);
  config.k = 3;
  config.n = 7;
  EXPECT_EQ(code_of([&] { generate_instance(config); }), ErrorCode::kInvalidDegree);
}

}  // namespace
}  // namespace hybridnet
