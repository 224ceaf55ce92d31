#include "hybridnet/workloads.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "hybridnet/io.h"

namespace hybridnet {

SizeDistribution::SizeDistribution(std::vector<std::pair<double, double>> cdf)
    : cdf_(std::move(cdf)) {
  if (cdf_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "size distribution is empty");
  }
  double last_size = -kInfinity;
  double last_p = 0;
  for (const auto& [size, p] : cdf_) {
    if (!(size > 0) || size < last_size || p < last_p || p > 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "size distribution must be a nondecreasing CDF over "
                  "positive sizes");
    }
    last_size = size;
    last_p = p;
  }
  if (std::abs(last_p - 1) > 1e-12) {
    throw Error(ErrorCode::kInvalidArgument, "size CDF must end at 1");
  }
}

SizeDistribution SizeDistribution::web_search() {
  return SizeDistribution({{6, 0},       {6, 0.15},     {13, 0.2},
                           {19, 0.3},    {33, 0.4},     {53, 0.53},
                           {133, 0.6},   {667, 0.7},    {1333, 0.8},
                           {3333, 0.9},  {6667, 0.97},  {20000, 1}});
}

SizeDistribution SizeDistribution::constant(double size) {
  return SizeDistribution({{size, 1}});
}

double SizeDistribution::mean() const {
  double total = 0;
  double prev = 0;
  for (const auto& [size, p] : cdf_) {
    total += size * (p - prev);
    prev = p;
  }
  return total;
}

double SizeDistribution::sample(Rng& rng) const {
  const double u = rng.uniform01();
  for (const auto& [size, p] : cdf_) {
    if (u < p) return size;
  }
  return cdf_.back().first;
}

void check_config(const WorkloadConfig& config) {
  if (config.n < 2 || config.k < 1 || config.k >= config.n ||
      (static_cast<long>(config.n) * config.k) % 2 != 0) {
    throw Error(ErrorCode::kInvalidDegree,
                "need k < n and n*k even (n=" + std::to_string(config.n) +
                    ", k=" + std::to_string(config.k) + ")");
  }
  if (!(config.default_capacity > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "capacity must be positive");
  }
  if (const auto* p = std::get_if<PfabricModel>(&config.demand_model)) {
    if (!(p->rate > 0) || !(p->duration > 0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rate and duration must be positive");
    }
  }
}

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

// Whether some pair of leftover stubs can still be joined.
bool suitable(const EdgeSet& edges, const std::map<int, int>& potential) {
  if (potential.empty()) return true;
  for (auto a = potential.begin(); a != potential.end(); ++a) {
    for (auto b = potential.begin(); b != a; ++b) {
      if (!edges.contains({b->first, a->first})) return true;
    }
  }
  return false;
}

// One attempt of the incremental pairing procedure: shuffle the free
// stubs, join consecutive pairs that form new simple edges, and repeat on
// the leftovers.
std::optional<EdgeSet> try_regular(int n, int k, Rng& rng) {
  EdgeSet edges;
  std::vector<int> stubs;
  for (int r = 0; r < k; ++r) {
    for (int v = 0; v < n; ++v) stubs.push_back(v);
  }
  while (!stubs.empty()) {
    std::map<int, int> potential;
    rng.shuffle(stubs);
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int a = stubs[i];
      int b = stubs[i + 1];
      if (a > b) std::swap(a, b);
      if (a != b && !edges.contains({a, b})) {
        edges.insert({a, b});
      } else {
        ++potential[a];
        ++potential[b];
      }
    }
    if (!suitable(edges, potential)) return std::nullopt;
    stubs.clear();
    for (const auto& [node, count] : potential) {
      for (int c = 0; c < count; ++c) stubs.push_back(node);
    }
  }
  return edges;
}

bool connected(int n, const EdgeSet& edges) {
  std::vector<std::vector<int>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

}  // namespace

HybridNetwork gen_k_regular(int n, int k, std::uint64_t seed, double capacity) {
  WorkloadConfig config;
  config.n = n;
  config.k = k;
  config.default_capacity = capacity;
  check_config(config);
  Rng rng(seed);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto edges = try_regular(n, k, rng);
    if (!edges || !connected(n, *edges)) continue;
    NetworkBuilder builder(n);
    for (const auto& [a, b] : *edges) builder.add_static(a, b, capacity);
    builder.complete_reconfigurable(capacity);
    return builder.build();
  }
  throw Error(ErrorCode::kGenerationTimeout,
              "no connected simple k-regular graph after 10^4 samples");
}

DemandMatrix gen_pfabric_demands(int n, double rate, double duration,
                                 const SizeDistribution& sizes,
                                 std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "need at least 2 nodes");
  if (!(rate > 0) || !(duration > 0)) {
    throw Error(ErrorCode::kInvalidArgument, "rate and duration must be positive");
  }
  DemandMatrix d(n);
  Rng rng(seed);
  double t = rng.exponential(rate);
  while (t < duration) {
    const NodeId i = static_cast<NodeId>(rng.uniform_int(n));
    NodeId j = static_cast<NodeId>(rng.uniform_int(n - 1));
    if (j >= i) ++j;
    d.add(i, j, sizes.sample(rng));
    t += rng.exponential(rate);
  }
  return d;
}

Trace load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open trace " + path.string());
  }
  const DemandMatrix raw = read_demands(in, std::numeric_limits<int>::max());
  std::map<std::int64_t, NodeId> dense;
  for (const auto& [pair, value] : raw.entries()) {
    dense.emplace(pair.first, 0);
    dense.emplace(pair.second, 0);
  }
  Trace trace;
  for (auto& [original, id] : dense) {
    id = static_cast<NodeId>(trace.summary.original_ids.size());
    trace.summary.original_ids.push_back(original);
  }
  trace.summary.num_nodes = static_cast<int>(dense.size());
  trace.demands = DemandMatrix(trace.summary.num_nodes);
  for (const auto& [pair, value] : raw.entries()) {
    trace.demands.set(dense.at(pair.first), dense.at(pair.second), value);
  }
  trace.summary.nonzero = trace.demands.size();
  trace.summary.total = trace.demands.total();
  return trace;
}

Instance generate_instance(const WorkloadConfig& config) {
  check_config(config);
  Instance instance;
  instance.net = gen_k_regular(config.n, config.k, derive_seed(config.seed, 1),
                               config.default_capacity);
  if (const auto* p = std::get_if<PfabricModel>(&config.demand_model)) {
    instance.demands = gen_pfabric_demands(config.n, p->rate, p->duration,
                                           p->sizes, derive_seed(config.seed, 2));
  } else {
    const Trace trace = load_trace(std::get<TraceModel>(config.demand_model).path);
    if (trace.summary.num_nodes > config.n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "trace has " + std::to_string(trace.summary.num_nodes) +
                      " nodes but the topology only " + std::to_string(config.n));
    }
    instance.demands = DemandMatrix(config.n);
    for (const auto& [pair, value] : trace.demands.entries()) {
      instance.demands.set(pair.first, pair.second, value);
    }
  }
  return instance;
}

}  // namespace hybridnet
