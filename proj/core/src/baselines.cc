#include "hybridnet/baselines.h"

#include <algorithm>

#include "hybridnet/matching.h"

namespace hybridnet {

namespace {

// Candidate pairs with positive weight, ascending.
std::vector<std::pair<NodePair, double>> weighted_pairs(const HybridNetwork& net,
                                                        const DemandMatrix& d) {
  std::vector<std::pair<NodePair, double>> out;
  for (const NodePair& p : d.demand_pairs()) {
    if (net.reconfigurable_link(p.u, p.v) == kNoLink) continue;
    const double w = pair_weight(d, p);
    if (w > 0) out.push_back({p, w});
  }
  return out;
}

}  // namespace

CongestionReport oblivious(const HybridNetwork& net, const DemandMatrix& d,
                           const EvalSpec& spec) {
  return eval_matching(net, d, Matching{}, spec);
}

double pair_weight(const DemandMatrix& d, NodePair pair) {
  return d.at(pair.u, pair.v) + d.at(pair.v, pair.u);
}

double matching_weight(const DemandMatrix& d, const Matching& m) {
  double total = 0;
  for (const NodePair& p : m.pairs()) total += pair_weight(d, p);
  return total;
}

Matching max_weight_matching(const HybridNetwork& net, const DemandMatrix& d) {
  std::vector<WeightedEdge> edges;
  for (const auto& [pair, w] : weighted_pairs(net, d)) {
    edges.push_back({pair.u, pair.v, w});
  }
  const std::vector<int> mate = blossom_matching(net.num_nodes(), edges);
  std::vector<NodePair> pairs;
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    if (mate[v] > v) pairs.push_back({v, mate[v]});
  }
  return Matching(std::move(pairs));
}

Matching greedy_matching(const HybridNetwork& net, const DemandMatrix& d) {
  auto candidates = weighted_pairs(net, d);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<bool> used(net.num_nodes(), false);
  std::vector<NodePair> pairs;
  for (const auto& [pair, w] : candidates) {
    if (used[pair.u] || used[pair.v]) continue;
    used[pair.u] = used[pair.v] = true;
    pairs.push_back(pair);
  }
  std::sort(pairs.begin(), pairs.end());
  return Matching(std::move(pairs));
}

}  // namespace hybridnet
