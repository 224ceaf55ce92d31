#include "hybridnet/model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace hybridnet {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateLink: return "DuplicateLink";
    case ErrorCode::kNegativeCapacity: return "NegativeCapacity";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kIncompleteReconfigurableSet:
      return "IncompleteReconfigurableSet";
    case ErrorCode::kNodeOutOfRange: return "NodeOutOfRange";
    case ErrorCode::kInvalidMatching: return "InvalidMatching";
    case ErrorCode::kFlowUsesUnselectedReconfigurableLink:
      return "FlowUsesUnselectedReconfigurableLink";
    case ErrorCode::kNonConservedFlow: return "NonConservedFlow";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kDivisionGuard: return "DivisionGuard";
    case ErrorCode::kNotSingleSource: return "NotSingleSource";
    case ErrorCode::kNotSingleCommodity: return "NotSingleCommodity";
    case ErrorCode::kNonUniformCapacities: return "NonUniformCapacities";
    case ErrorCode::kNoRouteForCommodity: return "NoRouteForCommodity";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kInvalidDegree: return "InvalidDegree";
    case ErrorCode::kGenerationTimeout: return "GenerationTimeout";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kEmptyRecordSet: return "EmptyRecordSet";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool approx_equal(double a, double b) {
  if (a == b) return true;
  double diff = std::abs(a - b);
  if (diff <= kAbsTolerance) return true;
  return diff <= kRelTolerance * std::max(std::abs(a), std::abs(b));
}

// ---------------------------------------------------------------------------
// HybridNetwork

HybridNetwork::HybridNetwork(int num_nodes,
                             std::vector<BidirectedLink> static_links,
                             std::vector<BidirectedLink> reconfigurable_links)
    : num_nodes_(num_nodes),
      static_links_(std::move(static_links)),
      reconfigurable_links_(std::move(reconfigurable_links)) {
  if (num_nodes_ < 1) {
    throw Error(ErrorCode::kInvalidArgument, "network needs at least 1 node");
  }
  auto check = [&](const BidirectedLink& l) {
    if (l.a < 0 || l.a >= num_nodes_ || l.b < 0 || l.b >= num_nodes_) {
      std::ostringstream os;
      os << "link {" << l.a << "," << l.b << "} outside [0," << num_nodes_
         << ")";
      throw Error(ErrorCode::kNodeOutOfRange, os.str());
    }
  };
  links_.reserve(2 * (static_links_.size() + reconfigurable_links_.size()));
  for (const BidirectedLink& l : static_links_) {
    check(l);
    links_.push_back({l.a, l.b, LinkKind::kStatic, l.capacity_forward});
    links_.push_back({l.b, l.a, LinkKind::kStatic, l.capacity_backward});
  }
  pair_index_.assign(static_cast<std::size_t>(num_nodes_) * num_nodes_,
                     kNoLink);
  for (const BidirectedLink& l : reconfigurable_links_) {
    check(l);
    LinkId id = static_cast<LinkId>(links_.size());
    links_.push_back({l.a, l.b, LinkKind::kReconfigurable, l.capacity_forward});
    links_.push_back(
        {l.b, l.a, LinkKind::kReconfigurable, l.capacity_backward});
    if (l.a == l.b) continue;
    LinkId& fwd = pair_index_[l.a * num_nodes_ + l.b];
    if (fwd == kNoLink) {
      fwd = id;
      pair_index_[l.b * num_nodes_ + l.a] = id + 1;
    }
  }
  static_out_.resize(num_nodes_);
  for (LinkId id = 0; id < num_static_directed(); ++id) {
    static_out_[links_[id].tail].push_back(id);
  }
  for (auto& out : static_out_) {
    std::sort(out.begin(), out.end(), [&](LinkId x, LinkId y) {
      return std::pair(links_[x].head, x) < std::pair(links_[y].head, y);
    });
  }
}

LinkId HybridNetwork::reconfigurable_link(NodeId u, NodeId v) const {
  if (u < 0 || v < 0 || u >= num_nodes_ || v >= num_nodes_) return kNoLink;
  return pair_index_[u * num_nodes_ + v];
}

double HybridNetwork::c_max() const {
  double best = 0;
  for (const DirectedLink& l : links_) best = std::max(best, l.capacity);
  return best;
}

double HybridNetwork::c_min() const {
  if (links_.empty()) return 0;
  double best = kInfinity;
  for (const DirectedLink& l : links_) best = std::min(best, l.capacity);
  return best;
}

bool HybridNetwork::has_uniform_capacities() const {
  for (const DirectedLink& l : links_) {
    if (l.capacity != links_.front().capacity) return false;
  }
  return true;
}

NetworkBuilder& NetworkBuilder::add_static(NodeId a, NodeId b,
                                           double capacity_forward,
                                           double capacity_backward) {
  static_links_.push_back({a, b, capacity_forward, capacity_backward});
  return *this;
}

NetworkBuilder& NetworkBuilder::add_reconfigurable(NodeId a, NodeId b,
                                                   double capacity_forward,
                                                   double capacity_backward) {
  reconfigurable_links_.push_back({a, b, capacity_forward, capacity_backward});
  return *this;
}

NetworkBuilder& NetworkBuilder::complete_reconfigurable(
    double default_capacity) {
  std::set<NodePair> present;
  for (const BidirectedLink& l : reconfigurable_links_) {
    present.insert(NodePair::of(l.a, l.b));
  }
  for (NodeId u = 0; u < num_nodes_; ++u) {
    for (NodeId v = u + 1; v < num_nodes_; ++v) {
      if (!present.contains({u, v})) {
        reconfigurable_links_.push_back(
            {u, v, default_capacity, default_capacity});
      }
    }
  }
  return *this;
}

HybridNetwork NetworkBuilder::build() const {
  return HybridNetwork(num_nodes_, static_links_, reconfigurable_links_);
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationResult::has(ErrorCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

ValidationResult validate_network(const HybridNetwork& net) {
  ValidationResult result;
  auto report = [&](ErrorCode code, const std::string& what) {
    result.violations.push_back({code, what});
  };
  auto describe = [](const char* kind, const BidirectedLink& l) {
    std::ostringstream os;
    os << kind << " link {" << l.a << "," << l.b << "}";
    return os.str();
  };
  auto check_link = [&](const char* kind, const BidirectedLink& l) {
    if (l.a == l.b) report(ErrorCode::kSelfLoop, describe(kind, l));
    if (!(l.capacity_forward >= 0) || !(l.capacity_backward >= 0) ||
        std::isinf(l.capacity_forward) || std::isinf(l.capacity_backward)) {
      report(ErrorCode::kNegativeCapacity,
             describe(kind, l) + " has a negative or non-finite capacity");
    }
  };
  for (const BidirectedLink& l : net.static_links()) check_link("static", l);

  std::set<NodePair> seen;
  for (const BidirectedLink& l : net.reconfigurable_links()) {
    check_link("reconfigurable", l);
    if (l.a == l.b) continue;
    if (!seen.insert(NodePair::of(l.a, l.b)).second) {
      report(ErrorCode::kDuplicateLink,
             describe("reconfigurable", l) + " appears more than once");
    }
  }
  for (NodeId u = 0; u < net.num_nodes(); ++u) {
    for (NodeId v = u + 1; v < net.num_nodes(); ++v) {
      if (!seen.contains({u, v})) {
        std::ostringstream os;
        os << "missing reconfigurable pair {" << u << "," << v << "}";
        report(ErrorCode::kIncompleteReconfigurableSet, os.str());
      }
    }
  }
  return result;
}

void require_valid(const HybridNetwork& net) {
  ValidationResult result = validate_network(net);
  if (!result.ok()) {
    throw Error(result.violations.front().code,
                result.violations.front().message);
  }
}

// ---------------------------------------------------------------------------
// Demands

void DemandMatrix::check_pair(NodeId i, NodeId j) const {
  if (i < 0 || j < 0 || i >= num_nodes_ || j >= num_nodes_) {
    throw Error(ErrorCode::kNodeOutOfRange,
                "demand (" + std::to_string(i) + "," + std::to_string(j) +
                    ") outside [0," + std::to_string(num_nodes_) + ")");
  }
  if (i == j) {
    throw Error(ErrorCode::kInvalidArgument,
                "self-demand at node " + std::to_string(i));
  }
}

void DemandMatrix::set(NodeId i, NodeId j, double demand) {
  check_pair(i, j);
  if (!(demand >= 0) || std::isinf(demand)) {
    throw Error(ErrorCode::kInvalidArgument,
                "demand must be finite and nonnegative");
  }
  if (demand == 0) {
    entries_.erase({i, j});
  } else {
    entries_[{i, j}] = demand;
  }
}

void DemandMatrix::add(NodeId i, NodeId j, double demand) {
  set(i, j, at(i, j) + demand);
}

double DemandMatrix::at(NodeId i, NodeId j) const {
  auto it = entries_.find({i, j});
  return it == entries_.end() ? 0.0 : it->second;
}

std::vector<Commodity> DemandMatrix::commodities() const {
  std::vector<Commodity> out;
  out.reserve(entries_.size());
  for (const auto& [pair, demand] : entries_) {
    out.push_back({pair.first, pair.second, demand});
  }
  return out;
}

double DemandMatrix::total() const {
  double sum = 0;
  for (const auto& [pair, demand] : entries_) sum += demand;
  return sum;
}

DemandMatrix DemandMatrix::scaled(double factor) const {
  DemandMatrix out(num_nodes_);
  for (const auto& [pair, demand] : entries_) {
    out.set(pair.first, pair.second, demand * factor);
  }
  return out;
}

DemandMatrix DemandMatrix::without_pairs(std::span<const NodePair> pairs) const {
  DemandMatrix out = *this;
  for (const NodePair& p : pairs) {
    out.entries_.erase({p.u, p.v});
    out.entries_.erase({p.v, p.u});
  }
  return out;
}

std::vector<NodePair> DemandMatrix::demand_pairs() const {
  std::set<NodePair> pairs;
  for (const auto& [pair, demand] : entries_) {
    pairs.insert(NodePair::of(pair.first, pair.second));
  }
  return {pairs.begin(), pairs.end()};
}

DemandClass classify_demands(const DemandMatrix& d) {
  DemandClass out;
  if (d.empty()) return out;
  const auto& entries = d.entries();
  const double first_value = entries.begin()->second;
  std::set<NodeId> sources;
  std::set<NodeId> targets;
  for (const auto& [pair, demand] : entries) {
    sources.insert(pair.first);
    targets.insert(pair.second);
    if (demand != first_value) out.uniform = false;
  }
  if (entries.size() == 1) {
    out.structure = DemandStructure::kSingleCommodity;
  } else if (sources.size() == 1) {
    out.structure = DemandStructure::kSingleSource;
  } else if (targets.size() == 1) {
    out.structure = DemandStructure::kSingleDestination;
  } else {
    out.structure = DemandStructure::kMulti;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matching

Matching::Matching(std::vector<NodePair> pairs) {
  std::set<NodeId> used;
  for (NodePair& p : pairs) {
    p = NodePair::of(p.u, p.v);
    if (p.u == p.v) {
      throw Error(ErrorCode::kInvalidMatching,
                  "self-loop at node " + std::to_string(p.u));
    }
    if (!used.insert(p.u).second || !used.insert(p.v).second) {
      throw Error(ErrorCode::kInvalidMatching,
                  "pair {" + std::to_string(p.u) + "," + std::to_string(p.v) +
                      "} shares an endpoint with another pair");
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs_ = std::move(pairs);
}

bool Matching::contains(NodeId u, NodeId v) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), NodePair::of(u, v));
}

std::optional<NodeId> Matching::partner(NodeId node) const {
  for (const NodePair& p : pairs_) {
    if (p.u == node) return p.v;
    if (p.v == node) return p.u;
  }
  return std::nullopt;
}

bool matching_fits(const HybridNetwork& net, const Matching& m) {
  return std::all_of(m.pairs().begin(), m.pairs().end(), [&](NodePair p) {
    return net.reconfigurable_link(p.u, p.v) != kNoLink;
  });
}

std::vector<LinkId> matched_links(const HybridNetwork& net, const Matching& m) {
  std::vector<LinkId> out;
  for (const NodePair& p : m.pairs()) {
    LinkId id = net.reconfigurable_link(p.u, p.v);
    if (id == kNoLink) {
      throw Error(ErrorCode::kInvalidMatching,
                  "pair {" + std::to_string(p.u) + "," + std::to_string(p.v) +
                      "} is not a reconfigurable candidate");
    }
    out.push_back(id);
    out.push_back(HybridNetwork::reverse(id));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Flows

std::vector<double> Flow::aggregate(int num_links) const {
  std::vector<double> total(num_links, 0.0);
  for (const CommodityFlow& c : commodities) {
    for (const auto& [link, value] : c.link_flow) total[link] += value;
  }
  return total;
}

Flow flow_from_paths(std::vector<CommodityFlow> commodities,
                     std::vector<PathFlow> paths) {
  Flow flow;
  flow.commodities = std::move(commodities);
  for (CommodityFlow& c : flow.commodities) c.link_flow.clear();
  for (const PathFlow& p : paths) {
    if (p.amount <= 0) continue;
    auto& links = flow.commodities[p.commodity].link_flow;
    for (LinkId id : p.links) links[id] += p.amount;
  }
  std::erase_if(paths, [](const PathFlow& p) { return p.amount <= 0; });
  flow.paths = std::move(paths);
  return flow;
}

namespace {

// Net outflow per node for one commodity.
std::vector<double> net_outflow(const HybridNetwork& net,
                                const CommodityFlow& c) {
  std::vector<double> out(net.num_nodes(), 0.0);
  for (const auto& [id, value] : c.link_flow) {
    out[net.link(id).tail] += value;
    out[net.link(id).head] -= value;
  }
  return out;
}

bool link_allowed(const HybridNetwork& net, const std::vector<bool>& selected,
                  LinkId id) {
  return net.is_static(id) || selected[id];
}

std::vector<bool> selected_mask(const HybridNetwork& net, const Matching& m) {
  std::vector<bool> selected(net.num_links(), false);
  for (LinkId id : matched_links(net, m)) selected[id] = true;
  return selected;
}

}  // namespace

CongestionReport unroutable_report() {
  CongestionReport report;
  report.lambda = kInfinity;
  return report;
}

CongestionReport congestion_of(const HybridNetwork& net, const Matching& m,
                               const Flow& f) {
  std::vector<bool> selected = selected_mask(net, m);
  for (const CommodityFlow& c : f.commodities) {
    for (const auto& [id, value] : c.link_flow) {
      if (id < 0 || id >= net.num_links()) {
        throw Error(ErrorCode::kInvalidArgument, "flow on unknown link id");
      }
      if (!link_allowed(net, selected, id)) {
        std::ostringstream os;
        os << "commodity (" << c.source << "," << c.target
           << ") uses reconfigurable link " << net.link(id).tail << "->"
           << net.link(id).head << " outside the matching";
        throw Error(ErrorCode::kFlowUsesUnselectedReconfigurableLink, os.str());
      }
    }
    std::vector<double> out = net_outflow(net, c);
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      double expected = 0;
      if (v == c.source) expected = c.demand;
      if (v == c.target) expected = -c.demand;
      if (std::abs(out[v] - expected) > kAbsTolerance) {
        std::ostringstream os;
        os << "commodity (" << c.source << "," << c.target << ") node " << v
           << " imbalance " << out[v] - expected;
        throw Error(ErrorCode::kNonConservedFlow, os.str());
      }
    }
  }

  std::vector<double> total = f.aggregate(net.num_links());
  CongestionReport report;
  for (LinkId id = 0; id < net.num_links(); ++id) {
    if (!link_allowed(net, selected, id)) continue;
    double capacity = net.link(id).capacity;
    double load;
    if (total[id] <= 0) {
      load = 0;
    } else if (capacity <= 0) {
      load = kInfinity;
    } else {
      load = total[id] / capacity;
    }
    report.per_link_loads[id] = load;
    if (load > report.lambda) {
      report.lambda = load;
      report.argmax_link = id;
    }
  }
  return report;
}

namespace {

// True if the support of a commodity flow is exactly one simple
// source->target path.
bool is_single_path(const HybridNetwork& net, const CommodityFlow& c) {
  std::map<NodeId, LinkId> next;
  for (const auto& [id, value] : c.link_flow) {
    if (value <= 0) continue;
    if (!next.emplace(net.link(id).tail, id).second) return false;
  }
  if (next.empty()) return c.demand <= 0;
  std::set<NodeId> visited{c.source};
  NodeId at = c.source;
  std::size_t used = 0;
  while (at != c.target) {
    auto it = next.find(at);
    if (it == next.end()) return false;
    at = net.link(it->second).head;
    ++used;
    if (!visited.insert(at).second) return false;
  }
  return used == next.size();
}

}  // namespace

FlowAudit audit_flow(const HybridNetwork& net, const DemandMatrix& d,
                     const Matching& m, const Flow& f) {
  FlowAudit audit;
  std::vector<bool> selected = selected_mask(net, m);
  std::set<std::pair<NodeId, NodeId>> served;
  for (const CommodityFlow& c : f.commodities) {
    served.insert({c.source, c.target});
    if (!approx_equal(c.demand, d.at(c.source, c.target))) {
      audit.covers_demands = false;
    }
    bool uses_static = false;
    bool uses_own_link = false;
    bool uses_other_reconfigurable = false;
    for (const auto& [id, value] : c.link_flow) {
      if (value <= kAbsTolerance) continue;
      if (!link_allowed(net, selected, id)) audit.uses_unselected_link = true;
      if (net.is_static(id)) {
        uses_static = true;
      } else if (net.link(id).tail == c.source &&
                 net.link(id).head == c.target) {
        uses_own_link = true;
      } else {
        uses_other_reconfigurable = true;
      }
    }
    if (uses_other_reconfigurable || (uses_static && uses_own_link)) {
      audit.segregated = false;
    }
    if (!is_single_path(net, c)) audit.single_path = false;

    std::vector<double> out = net_outflow(net, c);
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      if (v == c.source) {
        audit.max_demand_residual =
            std::max(audit.max_demand_residual, std::abs(out[v] - c.demand));
      } else if (v != c.target) {
        audit.max_conservation_residual =
            std::max(audit.max_conservation_residual, std::abs(out[v]));
      }
    }
  }
  for (const auto& [pair, demand] : d.entries()) {
    if (!served.contains(pair)) audit.covers_demands = false;
  }
  return audit;
}

}  // namespace hybridnet
