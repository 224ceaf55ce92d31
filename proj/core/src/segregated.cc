#include "hybridnet/segregated.h"

#include <algorithm>

#include "flow_util.h"
#include "hybridnet/paths.h"
#include "hybridnet/rounding.h"

namespace hybridnet {

namespace {

LpSolution run_lp(const HybridNetwork& net, const LpProblem& problem,
                  const SegregatedOptions& options) {
  return options.solver ? solve_lp(net, problem, *options.solver)
                        : solve_lp(net, problem);
}

RoundedSolution finish(const HybridNetwork& net, Matching m, Flow flow,
                       double lower_bound) {
  RoundedSolution out;
  out.report = congestion_of(net, m, flow);
  out.lambda = out.report.lambda;
  out.matching = std::move(m);
  out.flow = std::move(flow);
  out.lp_lower_bound = lower_bound;
  return out;
}

}  // namespace

Matching round_matching(const LpSolution& sol) {
  std::vector<std::pair<double, NodePair>> chosen;
  for (const auto& [pair, z] : sol.z) {
    if (z > 0.5) chosen.push_back({z, pair});
  }
  // Two values above 1/2 at one node can only come from solver noise on the
  // degree row; the larger one wins.
  std::stable_sort(chosen.begin(), chosen.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<NodePair> pairs;
  std::vector<NodeId> used;
  for (const auto& [z, pair] : chosen) {
    if (std::find(used.begin(), used.end(), pair.u) != used.end() ||
        std::find(used.begin(), used.end(), pair.v) != used.end()) {
      continue;
    }
    used.push_back(pair.u);
    used.push_back(pair.v);
    pairs.push_back(pair);
  }
  return Matching(std::move(pairs));
}

Flow rescale_flows(const HybridNetwork& net, const LpSolution& sol,
                   const Matching& m) {
  const Flow& raw = sol.edge_flows;
  double largest = 0;
  for (const CommodityFlow& c : raw.commodities) {
    largest = std::max(largest, c.demand);
  }
  const double noise = 1e-9 * largest;

  std::vector<PathFlow> paths;
  for (int k = 0; k < static_cast<int>(raw.commodities.size()); ++k) {
    const CommodityFlow& c = raw.commodities[k];
    if (m.contains(c.source, c.target)) {
      paths.push_back({k, {net.reconfigurable_link(c.source, c.target)}, c.demand});
      continue;
    }
    const double z = sol.z_of(c.source, c.target);
    if (z >= 1 - 1e-12) {
      throw Error(ErrorCode::kDivisionGuard,
                  "unmatched pair with z = 1 cannot be rescaled");
    }
    std::vector<PathFlow> found;
    if (raw.paths.empty()) {
      found = extract_paths(net, c, k, noise);
    } else {
      for (const PathFlow& p : raw.paths) {
        if (p.commodity == k && p.amount > noise) found.push_back(p);
      }
    }
    double delivered = 0;
    for (PathFlow& p : found) {
      p.amount /= 1 - z;
      delivered += p.amount;
    }
    // The demand row only guarantees delivered >= demand; trimming any
    // excess keeps every load within the doubled fractional load.
    if (delivered < c.demand * (1 - 1e-6)) {
      throw Error(ErrorCode::kNumericalFailure,
                  "rescaled static flow does not cover its demand");
    }
    for (PathFlow& p : found) p.amount *= c.demand / delivered;
    paths.insert(paths.end(), found.begin(), found.end());
  }
  return flow_from_paths(raw.commodities, std::move(paths));
}

RoundedSolution solve_ss(const HybridNetwork& net, const DemandMatrix& d,
                         const SegregatedOptions& options) {
  if (d.empty()) return finish(net, Matching{}, Flow{}, 0);
  LpProblem problem =
      options.path_limit > 0
          ? build_mcrn_path_lp(net, d,
                               commodity_paths(RoutingGraph::static_only(net), d,
                                               options.path_limit))
          : build_mcrn_lp(net, d);
  LpSolution sol = run_lp(net, problem, options);
  if (!sol.optimal()) internal::throw_lp_failure(sol.status, "relaxation");
  Matching m = round_matching(sol);
  Flow flow = rescale_flows(net, sol, m);
  return finish(net, std::move(m), std::move(flow), sol.lambda_opt);
}

RoundedSolution solve_us(const HybridNetwork& net, const DemandMatrix& d,
                         int trials, std::uint64_t seed,
                         const SegregatedOptions& options) {
  if (trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "trials must be positive");
  }
  RoundedSolution stage1 = solve_ss(net, d, options);
  if (d.empty()) return stage1;

  const DemandMatrix rest = d.without_pairs(stage1.matching.pairs());
  const Flow direct = internal::direct_flows(net, d, stage1.matching);
  Flow rounded;
  if (!rest.empty()) {
    auto fractional = internal::route_splittable(
        net, rest, RoutingGraph::static_only(net), options.path_limit);
    if (!fractional) {
      // Stage 1 already routed these demands statically.
      throw Error(ErrorCode::kNumericalFailure,
                  "static routing infeasible after a feasible relaxation");
    }
    rounded = randomized_path_rounding(net, *fractional, direct, trials, seed);
  }
  Flow flow = internal::merge_flows(d, {&direct, &rounded});
  return finish(net, stage1.matching, std::move(flow), stage1.lp_lower_bound);
}

RoundedSolution solve_single_source_ss(const HybridNetwork& net,
                                       const DemandMatrix& d,
                                       const SegregatedOptions& options) {
  if (d.empty()) return finish(net, Matching{}, Flow{}, 0);
  const DemandClass cls = classify_demands(d);
  if (!cls.single_source() && !cls.single_destination()) {
    throw Error(ErrorCode::kNotSingleSource,
                "demands neither share a source nor a destination");
  }
  const auto commodities = d.commodities();
  const bool by_source = cls.single_source();
  const NodeId hub = by_source ? commodities.front().source
                               : commodities.front().target;

  std::vector<Matching> candidates{Matching{}};
  for (const Commodity& c : commodities) {
    const NodeId other = by_source ? c.target : c.source;
    if (net.reconfigurable_link(hub, other) != kNoLink) {
      candidates.emplace_back(std::vector<NodePair>{NodePair::of(hub, other)});
    }
  }

  const RoutingGraph graph = RoutingGraph::static_only(net);
  std::optional<RoundedSolution> best;
  for (const Matching& m : candidates) {
    const DemandMatrix rest = d.without_pairs(m.pairs());
    auto routed = internal::route_splittable(net, rest, graph, options.path_limit);
    if (!routed) continue;
    const Flow direct = internal::direct_flows(net, d, m);
    RoundedSolution candidate =
        finish(net, m, internal::merge_flows(d, {&direct, &*routed}), 0);
    if (!best || candidate.lambda <
                     best->lambda - 1e-12 * std::max(1.0, best->lambda)) {
      best = std::move(candidate);
    }
  }
  if (!best) {
    throw Error(ErrorCode::kInfeasible,
                "no candidate matching routes every demand");
  }
  best->lp_lower_bound = best->lambda;
  return std::move(*best);
}

}  // namespace hybridnet
