#include "hybridnet/paths.h"

#include <algorithm>
#include <deque>
#include <set>
#include <tuple>

namespace hybridnet {

RoutingGraph::RoutingGraph(const HybridNetwork& net,
                           const std::vector<bool>& allowed)
    : net_(&net), out_(net.num_nodes()), in_(net.num_nodes()) {
  for (LinkId id = 0; id < net.num_links(); ++id) {
    if (!allowed[id]) continue;
    out_[net.link(id).tail].push_back(id);
    in_[net.link(id).head].push_back(id);
  }
  auto by_head = [&](LinkId a, LinkId b) {
    return std::pair(net.link(a).head, a) < std::pair(net.link(b).head, b);
  };
  for (auto& list : out_) std::sort(list.begin(), list.end(), by_head);
}

RoutingGraph RoutingGraph::of_matching(const HybridNetwork& net,
                                       const Matching& m) {
  std::vector<bool> allowed(net.num_links(), false);
  for (LinkId id = 0; id < net.num_static_directed(); ++id) {
    allowed[id] = net.link(id).capacity > 0;
  }
  for (LinkId id : matched_links(net, m)) {
    allowed[id] = net.link(id).capacity > 0;
  }
  return RoutingGraph(net, allowed);
}

RoutingGraph RoutingGraph::static_only(const HybridNetwork& net) {
  return of_matching(net, Matching());
}

std::optional<Path> RoutingGraph::shortest_path(
    NodeId source, NodeId target, const std::vector<bool>* banned_nodes,
    const std::vector<bool>* banned_links) const {
  auto node_ok = [&](NodeId v) { return !banned_nodes || !(*banned_nodes)[v]; };
  auto link_ok = [&](LinkId id) {
    return !banned_links || !(*banned_links)[id];
  };
  if (!node_ok(source) || !node_ok(target)) return std::nullopt;

  // Hop distance to the target over reversed links.
  std::vector<int> dist(num_nodes(), -1);
  std::deque<NodeId> queue{target};
  dist[target] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (v == source) break;
    for (LinkId id : in_[v]) {
      NodeId u = net_->link(id).tail;
      if (dist[u] != -1 || !node_ok(u) || !link_ok(id)) continue;
      dist[u] = dist[v] + 1;
      queue.push_back(u);
    }
  }
  if (dist[source] == -1) return std::nullopt;

  // Walk forward, always taking the smallest admissible (head, id).
  Path path;
  NodeId at = source;
  while (at != target) {
    LinkId next = kNoLink;
    for (LinkId id : out_[at]) {
      NodeId head = net_->link(id).head;
      if (link_ok(id) && node_ok(head) && dist[head] == dist[at] - 1) {
        next = id;
        break;
      }
    }
    path.push_back(next);
    at = net_->link(next).head;
  }
  return path;
}

namespace {

struct RankedPath {
  std::size_t hops;
  std::vector<NodeId> nodes;
  Path links;

  auto key() const { return std::tie(hops, nodes, links); }
  bool operator<(const RankedPath& other) const { return key() < other.key(); }
};

}  // namespace

std::vector<Path> RoutingGraph::k_shortest_paths(NodeId source, NodeId target,
                                                 int k) const {
  std::vector<Path> accepted;
  if (k <= 0 || source == target) return accepted;
  auto first = shortest_path(source, target);
  if (!first) return accepted;
  accepted.push_back(*first);

  std::set<RankedPath> candidates;
  std::set<Path> seen{*first};
  std::vector<bool> banned_nodes(num_nodes(), false);
  std::vector<bool> banned_links(net_->num_links(), false);

  while (static_cast<int>(accepted.size()) < k) {
    const Path previous = accepted.back();
    const std::vector<NodeId> prev_nodes = path_nodes(*net_, source, previous);
    for (std::size_t i = 0; i < previous.size(); ++i) {
      const NodeId spur = prev_nodes[i];
      std::fill(banned_nodes.begin(), banned_nodes.end(), false);
      std::fill(banned_links.begin(), banned_links.end(), false);
      for (const Path& p : accepted) {
        if (p.size() > i && std::equal(previous.begin(), previous.begin() + i,
                                       p.begin())) {
          banned_links[p[i]] = true;
        }
      }
      for (std::size_t r = 0; r < i; ++r) banned_nodes[prev_nodes[r]] = true;
      auto spur_path = shortest_path(spur, target, &banned_nodes, &banned_links);
      if (!spur_path) continue;
      Path total(previous.begin(), previous.begin() + i);
      total.insert(total.end(), spur_path->begin(), spur_path->end());
      if (!seen.insert(total).second) continue;
      candidates.insert(
          {total.size(), path_nodes(*net_, source, total), std::move(total)});
    }
    if (candidates.empty()) break;
    accepted.push_back(candidates.begin()->links);
    candidates.erase(candidates.begin());
  }
  return accepted;
}

std::vector<Path> RoutingGraph::all_simple_paths(NodeId source, NodeId target,
                                                 std::size_t limit) const {
  std::vector<Path> found;
  if (source == target) return found;
  std::vector<bool> on_path(num_nodes(), false);
  Path current;
  on_path[source] = true;
  std::function<void(NodeId)> dfs = [&](NodeId at) {
    for (LinkId id : out_[at]) {
      NodeId head = net_->link(id).head;
      if (on_path[head]) continue;
      current.push_back(id);
      if (head == target) {
        if (found.size() >= limit) {
          throw Error(ErrorCode::kInstanceTooLarge,
                      "more than " + std::to_string(limit) + " simple paths");
        }
        found.push_back(current);
      } else {
        on_path[head] = true;
        dfs(head);
        on_path[head] = false;
      }
      current.pop_back();
    }
  };
  dfs(source);
  return found;
}

std::vector<NodeId> path_nodes(const HybridNetwork& net, NodeId source,
                               const Path& path) {
  std::vector<NodeId> nodes{source};
  for (LinkId id : path) nodes.push_back(net.link(id).head);
  return nodes;
}

PathSets commodity_paths(const RoutingGraph& graph, const DemandMatrix& d,
                         int k, std::size_t limit) {
  PathSets out;
  for (const Commodity& c : d.commodities()) {
    if (k > 0) {
      out.push_back(graph.k_shortest_paths(c.source, c.target, k));
    } else {
      out.push_back(graph.all_simple_paths(c.source, c.target, limit));
    }
  }
  return out;
}

}  // namespace hybridnet
