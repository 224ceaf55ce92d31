#include "flow_util.h"

#include <map>
#include <string>

namespace hybridnet::internal {

Flow direct_flows(const HybridNetwork& net, const DemandMatrix& d,
                  const Matching& m) {
  std::vector<CommodityFlow> commodities;
  std::vector<PathFlow> paths;
  for (const Commodity& c : d.commodities()) {
    if (!m.contains(c.source, c.target)) continue;
    LinkId id = net.reconfigurable_link(c.source, c.target);
    paths.push_back({static_cast<int>(commodities.size()), {id}, c.demand});
    commodities.push_back({c.source, c.target, c.demand, {}});
  }
  return flow_from_paths(std::move(commodities), std::move(paths));
}

Flow merge_flows(const DemandMatrix& d, const std::vector<const Flow*>& parts) {
  std::map<std::pair<NodeId, NodeId>, int> slot;
  std::vector<CommodityFlow> commodities;
  for (const Commodity& c : d.commodities()) {
    slot[{c.source, c.target}] = static_cast<int>(commodities.size());
    commodities.push_back({c.source, c.target, c.demand, {}});
  }
  std::vector<PathFlow> paths;
  for (const Flow* part : parts) {
    for (const PathFlow& p : part->paths) {
      const CommodityFlow& c = part->commodities[p.commodity];
      PathFlow moved = p;
      moved.commodity = slot.at({c.source, c.target});
      paths.push_back(std::move(moved));
    }
  }
  std::stable_sort(paths.begin(), paths.end(),
                   [](const PathFlow& a, const PathFlow& b) {
                     return a.commodity < b.commodity;
                   });
  return flow_from_paths(std::move(commodities), std::move(paths));
}

void throw_lp_failure(LpStatus status, const char* context) {
  switch (status) {
    case LpStatus::kInfeasible:
      throw Error(ErrorCode::kInfeasible,
                  std::string(context) +
                      ": a positive demand has no route of positive capacity");
    case LpStatus::kUnbounded:
      throw Error(ErrorCode::kUnbounded, context);
    default:
      throw Error(ErrorCode::kNumericalFailure,
                  std::string(context) + ": simplex did not converge");
  }
}

std::optional<Flow> route_splittable(const HybridNetwork& net,
                                     const DemandMatrix& d,
                                     const RoutingGraph& graph,
                                     int path_limit) {
  if (d.empty()) return Flow{};
  LpProblem problem;
  if (path_limit > 0) {
    PathSets paths = commodity_paths(graph, d, path_limit);
    for (const auto& set : paths) {
      if (set.empty()) return std::nullopt;
    }
    problem = build_path_routing_lp(net, d, paths);
  } else {
    std::vector<bool> allowed(net.num_links(), false);
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      for (LinkId id : graph.out(v)) allowed[id] = true;
    }
    // Express the allowed set as static links plus matched pairs.
    std::vector<NodePair> pairs;
    for (LinkId id = net.num_static_directed(); id < net.num_links(); id += 2) {
      if (allowed[id] || allowed[id + 1]) {
        pairs.push_back(NodePair::of(net.link(id).tail, net.link(id).head));
      }
    }
    problem = build_routing_lp(net, d, Matching(std::move(pairs)));
  }
  LpSolution solution = solve_lp(net, problem);
  if (solution.status == LpStatus::kInfeasible) return std::nullopt;
  if (!solution.optimal()) throw_lp_failure(solution.status, "routing LP");
  return clean_solver_flow(net, solution.edge_flows, 1e-9 * problem.demand_scale);
}

std::optional<Flow> route_shortest(const HybridNetwork& net,
                                   const DemandMatrix& d,
                                   const RoutingGraph& graph) {
  (void)net;
  std::vector<CommodityFlow> commodities;
  std::vector<PathFlow> paths;
  for (const Commodity& c : d.commodities()) {
    auto path = graph.shortest_path(c.source, c.target);
    if (!path) return std::nullopt;
    paths.push_back({static_cast<int>(commodities.size()), *path, c.demand});
    commodities.push_back({c.source, c.target, c.demand, {}});
  }
  return flow_from_paths(std::move(commodities), std::move(paths));
}

}  // namespace hybridnet::internal
