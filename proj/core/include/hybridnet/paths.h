#ifndef HYBRIDNET_PATHS_H
#define HYBRIDNET_PATHS_H

#include <functional>
#include <optional>
#include <vector>

#include "hybridnet/lp_engine.h"
#include "hybridnet/model.h"

namespace hybridnet {

// Adjacency over a subset of the directed links of a network. Out-links are
// ordered by (head, link id), which fixes every tie-break below.
class RoutingGraph {
 public:
  RoutingGraph(const HybridNetwork& net, const std::vector<bool>& allowed);

  // Static links plus the links of m, restricted to positive capacity.
  static RoutingGraph of_matching(const HybridNetwork& net, const Matching& m);
  // Static links with positive capacity.
  static RoutingGraph static_only(const HybridNetwork& net);

  const HybridNetwork& network() const { return *net_; }
  int num_nodes() const { return net_->num_nodes(); }
  std::span<const LinkId> out(NodeId v) const { return out_[v]; }
  std::span<const LinkId> in(NodeId v) const { return in_[v]; }

  // Fewest-hop path; among those, the lexicographically smallest node
  // sequence, then smallest link ids. Banned nodes/links are skipped.
  std::optional<Path> shortest_path(
      NodeId source, NodeId target, const std::vector<bool>* banned_nodes = nullptr,
      const std::vector<bool>* banned_links = nullptr) const;

  // Yen's algorithm over hop count; at most k loopless paths in
  // nondecreasing hop order with the tie-break above.
  std::vector<Path> k_shortest_paths(NodeId source, NodeId target, int k) const;

  // Every simple source-target path in lexicographic DFS order. Throws
  // kInstanceTooLarge once more than `limit` paths exist.
  std::vector<Path> all_simple_paths(NodeId source, NodeId target,
                                     std::size_t limit) const;

 private:
  const HybridNetwork* net_;
  std::vector<std::vector<LinkId>> out_;
  std::vector<std::vector<LinkId>> in_;
};

std::vector<NodeId> path_nodes(const HybridNetwork& net, NodeId source,
                               const Path& path);

// K shortest paths for every commodity of d in the given graph
// (k <= 0 means every simple path, subject to `limit`).
PathSets commodity_paths(const RoutingGraph& graph, const DemandMatrix& d,
                         int k, std::size_t limit = 1000000);

}  // namespace hybridnet

#endif  // HYBRIDNET_PATHS_H
