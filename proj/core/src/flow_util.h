#ifndef HYBRIDNET_SRC_FLOW_UTIL_H
#define HYBRIDNET_SRC_FLOW_UTIL_H

// Internal helpers shared by the solvers.

#include <optional>
#include <vector>

#include "hybridnet/lp_engine.h"
#include "hybridnet/model.h"
#include "hybridnet/paths.h"

namespace hybridnet::internal {

// Flows of the commodities whose pair is in m, each riding its own
// reconfigurable link as a single path.
Flow direct_flows(const HybridNetwork& net, const DemandMatrix& d,
                  const Matching& m);

// Concatenates flows and orders commodities like d.commodities().
Flow merge_flows(const DemandMatrix& d, const std::vector<const Flow*>& parts);

// Min-congestion splittable routing of d inside `graph`. With path_limit > 0
// every commodity is limited to its path_limit shortest paths; otherwise the
// compact program over the graph's links is solved. Returns nullopt if some
// commodity cannot be routed. The flow carries a path decomposition.
std::optional<Flow> route_splittable(const HybridNetwork& net,
                                     const DemandMatrix& d,
                                     const RoutingGraph& graph,
                                     int path_limit);

// Every commodity on its single fewest-hop path; nullopt if some commodity
// has none.
std::optional<Flow> route_shortest(const HybridNetwork& net,
                                   const DemandMatrix& d,
                                   const RoutingGraph& graph);

// Throws the library error matching a non-optimal LP outcome.
[[noreturn]] void throw_lp_failure(LpStatus status, const char* context);

}  // namespace hybridnet::internal

#endif  // HYBRIDNET_SRC_FLOW_UTIL_H
