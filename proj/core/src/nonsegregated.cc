#include "hybridnet/nonsegregated.h"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>

#include "flow_util.h"
#include "hybridnet/lp_engine.h"
#include "hybridnet/maxflow.h"
#include "hybridnet/paths.h"
#include "hybridnet/rounding.h"

namespace hybridnet {

const char* tau_name(Tau tau) {
  switch (tau) {
    case Tau::kSS: return "SS";
    case Tau::kUS: return "US";
    case Tau::kSN: return "SN";
    case Tau::kUN: return "UN";
  }
  return "?";
}

std::optional<Tau> parse_tau(std::string_view text) {
  std::string upper(text);
  for (char& ch : upper) ch = static_cast<char>(std::toupper(ch));
  for (Tau tau : {Tau::kSS, Tau::kUS, Tau::kSN, Tau::kUN}) {
    if (upper == tau_name(tau)) return tau;
  }
  return std::nullopt;
}

Routing route_matching(const HybridNetwork& net, const DemandMatrix& d,
                       const Matching& m, const EvalSpec& spec) {
  if (!matching_fits(net, m)) {
    throw Error(ErrorCode::kInvalidMatching,
                "matching uses a pair without a reconfigurable link");
  }
  if (spec.path_limit < 0) {
    throw Error(ErrorCode::kInvalidArgument, "path limit must be >= 0");
  }
  const bool segregated = is_segregated(spec.tau);
  Flow direct;
  DemandMatrix rest = d;
  if (segregated) {
    direct = internal::direct_flows(net, d, m);
    rest = d.without_pairs(m.pairs());
  }
  const RoutingGraph graph = segregated ? RoutingGraph::static_only(net)
                                        : RoutingGraph::of_matching(net, m);

  std::optional<Flow> routed;
  if (is_splittable(spec.tau)) {
    routed = internal::route_splittable(net, rest, graph, spec.path_limit);
  } else if (spec.path_limit == 1) {
    routed = internal::route_shortest(net, rest, graph);
  } else {
    auto fractional =
        internal::route_splittable(net, rest, graph, spec.path_limit);
    if (fractional) {
      const int trials = spec.trials > 0
                             ? spec.trials
                             : default_trials(static_cast<int>(
                                   net.static_links().size()));
      routed = randomized_path_rounding(net, *fractional, direct, trials,
                                        spec.seed);
    }
  }
  if (!routed) return {Flow{}, unroutable_report()};
  Flow flow = internal::merge_flows(d, {&direct, &*routed});
  CongestionReport report = congestion_of(net, m, flow);
  return {std::move(flow), std::move(report)};
}

CongestionReport eval_matching(const HybridNetwork& net, const DemandMatrix& d,
                               const Matching& m, const EvalSpec& spec) {
  return route_matching(net, d, m, spec).report;
}

// ---------------------------------------------------------------------------
// Single commodity, uniform capacities.

namespace {

struct UnitGraph {
  IntegerMaxFlow flow;
  std::vector<LinkId> arc_link;  // per forward arc index / 2
  std::int64_t units = 0;
};

UnitGraph unit_max_flow(const HybridNetwork& net, NodeId s, NodeId t,
                        std::span<const NodePair> pairs) {
  UnitGraph g{IntegerMaxFlow(net.num_nodes()), {}, 0};
  for (LinkId id = 0; id < net.num_static_directed(); ++id) {
    if (net.link(id).capacity <= 0) continue;
    g.flow.add_arc(net.link(id).tail, net.link(id).head, 1);
    g.arc_link.push_back(id);
  }
  for (const NodePair& p : pairs) {
    g.flow.add_arc(p.u, p.v, 1);
    g.arc_link.push_back(net.reconfigurable_link(p.u, p.v));
    g.flow.add_arc(p.v, p.u, 1);
    g.arc_link.push_back(net.reconfigurable_link(p.v, p.u));
  }
  g.units = g.flow.run(s, t);
  return g;
}

std::int64_t units_of(const HybridNetwork& net, NodeId s, NodeId t,
                      std::span<const NodePair> pairs) {
  return unit_max_flow(net, s, t, pairs).units;
}

Commodity single_commodity(const HybridNetwork& net, const DemandMatrix& d) {
  if (classify_demands(d).structure != DemandStructure::kSingleCommodity) {
    throw Error(ErrorCode::kNotSingleCommodity,
                "demand matrix has more than one commodity");
  }
  if (!net.has_uniform_capacities() || net.c_min() <= 0) {
    throw Error(ErrorCode::kNonUniformCapacities,
                "all link capacities must equal one positive value");
  }
  return d.commodities().front();
}

bool is_candidate(const HybridNetwork& net, NodeId u, NodeId v) {
  return net.reconfigurable_link(u, v) != kNoLink;
}

Matching greedy_pairs(const HybridNetwork& net, NodeId s, NodeId t) {
  const int n = net.num_nodes();
  std::vector<NodePair> pairs;
  std::vector<bool> used(n, false);
  std::int64_t current = units_of(net, s, t, pairs);
  while (true) {
    std::int64_t best_gain = 0;
    NodePair best_pair;
    for (NodeId u = 0; u < n; ++u) {
      if (used[u]) continue;
      for (NodeId v = u + 1; v < n; ++v) {
        if (used[v] || !is_candidate(net, u, v)) continue;
        pairs.push_back({u, v});
        const std::int64_t gain = units_of(net, s, t, pairs) - current;
        pairs.pop_back();
        if (gain > best_gain) {
          best_gain = gain;
          best_pair = {u, v};
        }
      }
    }
    if (best_gain == 0) break;
    pairs.push_back(best_pair);
    used[best_pair.u] = used[best_pair.v] = true;
    current += best_gain;
  }
  return Matching(std::move(pairs));
}

class MatchingSearch {
 public:
  MatchingSearch(const HybridNetwork& net, NodeId s, NodeId t, long budget)
      : net_(net), s_(s), t_(t), budget_(budget), matched_(net.num_nodes()) {
    order_ = {s, t};
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      if (v != s && v != t) order_.push_back(v);
    }
  }

  void seed(const Matching& m) {
    best_pairs_.assign(m.pairs().begin(), m.pairs().end());
    best_units_ = units_of(net_, s_, t_, best_pairs_);
  }

  void run() { search(0); }

  bool exhausted() const { return exhausted_; }
  const std::vector<NodePair>& best_pairs() const { return best_pairs_; }

 private:
  std::int64_t evaluate(std::span<const NodePair> pairs) {
    if (++calls_ > budget_) exhausted_ = true;
    return units_of(net_, s_, t_, pairs);
  }

  void search(std::size_t i) {
    if (exhausted_) return;
    while (i < order_.size() && matched_[order_[i]]) ++i;

    const std::int64_t value = evaluate(pairs_);
    if (value > best_units_) {
      best_units_ = value;
      best_pairs_ = pairs_;
    }
    if (i == order_.size()) return;

    // Relaxation: every still-free node may pair with every other.
    std::vector<NodePair> relaxed = pairs_;
    for (std::size_t a = i; a < order_.size(); ++a) {
      if (matched_[order_[a]]) continue;
      for (std::size_t b = a + 1; b < order_.size(); ++b) {
        if (matched_[order_[b]]) continue;
        if (is_candidate(net_, order_[a], order_[b])) {
          relaxed.push_back(NodePair::of(order_[a], order_[b]));
        }
      }
    }
    if (relaxed.size() == pairs_.size()) return;
    if (evaluate(relaxed) <= best_units_) return;

    const NodeId v = order_[i];
    matched_[v] = true;
    for (std::size_t j = i + 1; j < order_.size() && !exhausted_; ++j) {
      const NodeId w = order_[j];
      if (matched_[w] || !is_candidate(net_, v, w)) continue;
      matched_[w] = true;
      pairs_.push_back(NodePair::of(v, w));
      search(i + 1);
      pairs_.pop_back();
      matched_[w] = false;
    }
    // v stays unmatched: mark it decided so the relaxation skips it.
    search(i + 1);
    matched_[v] = false;
  }

  const HybridNetwork& net_;
  NodeId s_;
  NodeId t_;
  long budget_;
  long calls_ = 0;
  bool exhausted_ = false;
  std::vector<NodeId> order_;
  std::vector<bool> matched_;
  std::vector<NodePair> pairs_;
  std::vector<NodePair> best_pairs_;
  std::int64_t best_units_ = -1;
};

}  // namespace

Matching greedy_augmenting_matching(const HybridNetwork& net,
                                    const DemandMatrix& d) {
  if (d.empty()) return Matching{};
  const Commodity c = single_commodity(net, d);
  return greedy_pairs(net, c.source, c.target);
}

SingleCommodityResult solve_single_commodity_uniform(const HybridNetwork& net,
                                                     const DemandMatrix& d,
                                                     long node_budget) {
  SingleCommodityResult out;
  if (d.empty()) {
    out.report = congestion_of(net, out.matching, out.flow);
    return out;
  }
  const Commodity c = single_commodity(net, d);
  MatchingSearch search(net, c.source, c.target, node_budget);
  search.seed(greedy_pairs(net, c.source, c.target));
  search.run();
  out.proven_optimal = !search.exhausted();
  out.matching = Matching(search.best_pairs());

  UnitGraph g = unit_max_flow(net, c.source, c.target, out.matching.pairs());
  out.max_flow_units = g.units;
  if (g.units == 0) {
    out.report = unroutable_report();
    return out;
  }
  const double per_unit = c.demand / static_cast<double>(g.units);
  CommodityFlow cf{c.source, c.target, c.demand, {}};
  for (std::size_t k = 0; k < g.arc_link.size(); ++k) {
    const std::int64_t units = g.flow.flow_on(static_cast<int>(2 * k));
    if (units > 0) cf.link_flow[g.arc_link[k]] += per_unit * units;
  }
  Flow raw;
  raw.commodities.push_back(std::move(cf));
  out.flow = decompose_paths(net, raw);
  out.report = congestion_of(net, out.matching, out.flow);
  return out;
}

// ---------------------------------------------------------------------------
// Brute force.

namespace {

constexpr double kPathAssignmentLimit = 1e6;

void enumerate_matchings(const std::vector<NodePair>& pairs, std::size_t index,
                         std::vector<bool>& used, std::vector<NodePair>& current,
                         std::vector<std::vector<NodePair>>& out) {
  if (index == pairs.size()) {
    out.push_back(current);
    return;
  }
  enumerate_matchings(pairs, index + 1, used, current, out);
  const NodePair& p = pairs[index];
  if (used[p.u] || used[p.v]) return;
  used[p.u] = used[p.v] = true;
  current.push_back(p);
  enumerate_matchings(pairs, index + 1, used, current, out);
  current.pop_back();
  used[p.u] = used[p.v] = false;
}

bool is_maximal(const std::vector<NodePair>& candidates,
                const std::vector<NodePair>& m, int n) {
  std::vector<bool> used(n, false);
  for (const NodePair& p : m) used[p.u] = used[p.v] = true;
  for (const NodePair& p : candidates) {
    if (!used[p.u] && !used[p.v]) return false;
  }
  return true;
}

// Exact unsplittable routing for a fixed matching by depth-first search
// over simple-path assignments. Returns nullopt if no assignment beats
// `bound`.
class PathAssignment {
 public:
  PathAssignment(const HybridNetwork& net, const DemandMatrix& d,
                 const Matching& m, bool segregated)
      : net_(net), d_(d), m_(m) {
    if (segregated) {
      direct_ = internal::direct_flows(net, d, m);
      rest_ = d.without_pairs(m.pairs());
    } else {
      rest_ = d;
    }
    const RoutingGraph graph = segregated ? RoutingGraph::static_only(net)
                                          : RoutingGraph::of_matching(net, m);
    commodities_ = rest_.commodities();
    double product = 1;
    for (const Commodity& c : commodities_) {
      options_.push_back(graph.all_simple_paths(
          c.source, c.target, static_cast<std::size_t>(kPathAssignmentLimit)));
      product *= static_cast<double>(options_[options_.size() - 1].size());
      if (product > kPathAssignmentLimit) {
        throw Error(ErrorCode::kInstanceTooLarge,
                    "more than 10^6 path assignments for one matching");
      }
    }
    order_.resize(commodities_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return commodities_[a].demand > commodities_[b].demand;
    });
  }

  std::optional<Routing> solve(double bound) {
    for (const auto& o : options_) {
      if (o.empty()) return std::nullopt;
    }
    load_ = direct_.aggregate(net_.num_links());
    double start = 0;
    for (LinkId id = 0; id < net_.num_links(); ++id) start = std::max(start, ratio(id));
    bound_ = bound;
    choice_.assign(commodities_.size(), -1);
    dfs(0, start);
    if (best_choice_.empty()) return std::nullopt;

    std::vector<CommodityFlow> cfs;
    std::vector<PathFlow> paths;
    for (std::size_t k = 0; k < commodities_.size(); ++k) {
      const Commodity& c = commodities_[k];
      cfs.push_back({c.source, c.target, c.demand, {}});
      paths.push_back({static_cast<int>(k), options_[k][best_choice_[k]], c.demand});
    }
    Flow routed = flow_from_paths(std::move(cfs), std::move(paths));
    Flow flow = internal::merge_flows(d_, {&direct_, &routed});
    CongestionReport report = congestion_of(net_, m_, flow);
    return Routing{std::move(flow), std::move(report)};
  }

 private:
  double ratio(LinkId id) const {
    if (load_[id] <= 0) return 0;
    const double c = net_.link(id).capacity;
    return c > 0 ? load_[id] / c : kInfinity;
  }

  void dfs(std::size_t depth, double current) {
    if (current >= bound_) return;
    if (depth == order_.size()) {
      bound_ = current;
      best_choice_ = choice_;
      return;
    }
    const int k = order_[depth];
    const double demand = commodities_[k].demand;
    for (std::size_t p = 0; p < options_[k].size(); ++p) {
      double next = current;
      for (LinkId id : options_[k][p]) {
        load_[id] += demand;
        next = std::max(next, ratio(id));
      }
      choice_[k] = static_cast<int>(p);
      dfs(depth + 1, next);
      for (LinkId id : options_[k][p]) load_[id] -= demand;
    }
  }

  const HybridNetwork& net_;
  const DemandMatrix& d_;
  const Matching& m_;
  Flow direct_;
  DemandMatrix rest_;
  std::vector<Commodity> commodities_;
  std::vector<std::vector<Path>> options_;
  std::vector<int> order_;
  std::vector<double> load_;
  std::vector<int> choice_;
  std::vector<int> best_choice_;
  double bound_ = kInfinity;
};

}  // namespace

ExactResult brute_force_opt(const HybridNetwork& net, const DemandMatrix& d,
                            const EvalSpec& spec, int node_limit) {
  if (net.num_nodes() > node_limit) {
    throw Error(ErrorCode::kInstanceTooLarge,
                "exhaustive search is limited to " + std::to_string(node_limit) +
                    " nodes");
  }
  ExactResult best;
  best.report = unroutable_report();
  if (d.empty()) {
    best.report = congestion_of(net, best.matching, best.flow);
    return best;
  }

  const bool segregated = is_segregated(spec.tau);
  std::vector<NodePair> candidates;
  if (segregated) {
    for (const NodePair& p : d.demand_pairs()) {
      if (is_candidate(net, p.u, p.v)) candidates.push_back(p);
    }
  } else {
    for (const BidirectedLink& link : net.reconfigurable_links()) {
      candidates.push_back(NodePair::of(link.a, link.b));
    }
    std::sort(candidates.begin(), candidates.end());
  }
  std::vector<std::vector<NodePair>> matchings;
  std::vector<bool> used(net.num_nodes(), false);
  std::vector<NodePair> current;
  enumerate_matchings(candidates, 0, used, current, matchings);

  EvalSpec exact = spec;
  exact.path_limit = 0;
  for (const auto& pairs : matchings) {
    // Extra links never hurt when shortcuts are allowed.
    if (!segregated && !is_maximal(candidates, pairs, net.num_nodes())) continue;
    Matching m(pairs);
    std::optional<Routing> routing;
    if (is_splittable(spec.tau)) {
      routing = route_matching(net, d, m, exact);
      if (!routing->report.finite()) routing.reset();
    } else {
      routing = PathAssignment(net, d, m, segregated).solve(best.report.lambda);
    }
    if (!routing) continue;
    const double bound = best.report.lambda;
    if (!best.report.finite() ||
        routing->report.lambda < bound - 1e-12 * std::max(1.0, bound)) {
      best.matching = std::move(m);
      best.flow = std::move(routing->flow);
      best.report = std::move(routing->report);
    }
  }
  return best;
}

}  // namespace hybridnet
