#ifndef HYBRIDNET_MODEL_H
#define HYBRIDNET_MODEL_H

#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hybridnet/error.h"

namespace hybridnet {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

inline constexpr LinkId kNoLink = -1;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Equality tolerances shared by every module.
inline constexpr double kAbsTolerance = 1e-9;
inline constexpr double kRelTolerance = 1e-7;

// Two quantities are considered equal if they agree within the absolute
// tolerance or within the relative tolerance of the larger magnitude.
bool approx_equal(double a, double b);

enum class LinkKind { kStatic, kReconfigurable };

struct DirectedLink {
  NodeId tail = 0;
  NodeId head = 0;
  LinkKind kind = LinkKind::kStatic;
  double capacity = 0;
};

// A bidirected link. capacity_forward applies to a->b, capacity_backward to
// b->a.
struct BidirectedLink {
  NodeId a = 0;
  NodeId b = 0;
  double capacity_forward = 0;
  double capacity_backward = 0;
};

// Unordered node pair, normalized so that u < v.
struct NodePair {
  NodeId u = 0;
  NodeId v = 0;

  static NodePair of(NodeId x, NodeId y) {
    return x < y ? NodePair{x, y} : NodePair{y, x};
  }
  auto operator<=>(const NodePair&) const = default;
};

// Static links plus a candidate set of reconfigurable links. Every
// bidirected link materializes as two anti-parallel directed links with
// consecutive ids (id and id ^ 1). Static links come first, so ids
// [0, num_static_directed()) are static and the remaining ids are
// reconfigurable.
//
// The constructor performs no validation beyond index ranges so that
// malformed networks can be inspected by validate_network(); solvers assume
// a network that validates cleanly.
class HybridNetwork {
 public:
  HybridNetwork() = default;
  HybridNetwork(int num_nodes, std::vector<BidirectedLink> static_links,
                std::vector<BidirectedLink> reconfigurable_links);

  int num_nodes() const { return num_nodes_; }
  std::span<const BidirectedLink> static_links() const { return static_links_; }
  std::span<const BidirectedLink> reconfigurable_links() const {
    return reconfigurable_links_;
  }

  int num_links() const { return static_cast<int>(links_.size()); }
  int num_static_directed() const {
    return static_cast<int>(2 * static_links_.size());
  }
  std::span<const DirectedLink> links() const { return links_; }
  const DirectedLink& link(LinkId id) const { return links_[id]; }
  bool is_static(LinkId id) const { return id < num_static_directed(); }
  static LinkId reverse(LinkId id) { return id ^ 1; }

  // Directed reconfigurable link u->v, or kNoLink if the pair is missing.
  LinkId reconfigurable_link(NodeId u, NodeId v) const;

  // Outgoing static directed links of a node, ordered by (head, id).
  std::span<const LinkId> static_out(NodeId node) const {
    return static_out_[node];
  }

  // Extremal capacities over all directed links; 0 for an empty network.
  double c_max() const;
  double c_min() const;

  // True if every directed capacity (static and reconfigurable) is equal.
  bool has_uniform_capacities() const;

 private:
  int num_nodes_ = 0;
  std::vector<BidirectedLink> static_links_;
  std::vector<BidirectedLink> reconfigurable_links_;
  std::vector<DirectedLink> links_;
  std::vector<LinkId> pair_index_;  // n*n table, kNoLink if absent
  std::vector<std::vector<LinkId>> static_out_;
};

// Incremental construction of a HybridNetwork.
class NetworkBuilder {
 public:
  explicit NetworkBuilder(int num_nodes) : num_nodes_(num_nodes) {}

  NetworkBuilder& add_static(NodeId a, NodeId b, double capacity_forward,
                             double capacity_backward);
  NetworkBuilder& add_static(NodeId a, NodeId b, double capacity) {
    return add_static(a, b, capacity, capacity);
  }
  NetworkBuilder& add_reconfigurable(NodeId a, NodeId b,
                                     double capacity_forward,
                                     double capacity_backward);
  // Adds every node pair not yet present as a reconfigurable candidate.
  NetworkBuilder& complete_reconfigurable(double default_capacity);

  HybridNetwork build() const;

 private:
  int num_nodes_;
  std::vector<BidirectedLink> static_links_;
  std::vector<BidirectedLink> reconfigurable_links_;
};

struct Violation {
  ErrorCode code;
  std::string message;
};

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ErrorCode code) const;
};

ValidationResult validate_network(const HybridNetwork& net);

// Throws Error with the first violation if the network is invalid.
void require_valid(const HybridNetwork& net);

struct Commodity {
  NodeId source = 0;
  NodeId target = 0;
  double demand = 0;
};

enum class DemandStructure {
  kEmpty,
  kMulti,
  kSingleSource,
  kSingleDestination,
  kSingleCommodity,
};

struct DemandClass {
  DemandStructure structure = DemandStructure::kEmpty;
  bool uniform = true;

  bool single_source() const {
    return structure == DemandStructure::kSingleSource ||
           structure == DemandStructure::kSingleCommodity;
  }
  bool single_destination() const {
    return structure == DemandStructure::kSingleDestination ||
           structure == DemandStructure::kSingleCommodity;
  }
};

// Nonnegative demand per ordered node pair. Only positive entries are
// stored; iteration order is (source, target) lexicographic.
class DemandMatrix {
 public:
  DemandMatrix() = default;
  explicit DemandMatrix(int num_nodes) : num_nodes_(num_nodes) {}

  int num_nodes() const { return num_nodes_; }

  // Throws kInvalidArgument on self-demands, negative or non-finite values,
  // or out-of-range nodes. Setting 0 removes the entry.
  void set(NodeId i, NodeId j, double demand);
  void add(NodeId i, NodeId j, double demand);
  double at(NodeId i, NodeId j) const;

  const std::map<std::pair<NodeId, NodeId>, double>& entries() const {
    return entries_;
  }
  std::vector<Commodity> commodities() const;
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double total() const;

  DemandMatrix scaled(double factor) const;
  // Copy with d(i,j) and d(j,i) removed for each pair.
  DemandMatrix without_pairs(std::span<const NodePair> pairs) const;

  // Pairs {i,j} with d(i,j) + d(j,i) > 0, ascending.
  std::vector<NodePair> demand_pairs() const;

  bool operator==(const DemandMatrix&) const = default;

 private:
  void check_pair(NodeId i, NodeId j) const;

  int num_nodes_ = 0;
  std::map<std::pair<NodeId, NodeId>, double> entries_;
};

DemandClass classify_demands(const DemandMatrix& d);

// A set of reconfigurable links whose endpoints are pairwise disjoint.
class Matching {
 public:
  Matching() = default;
  // Throws kInvalidMatching if two pairs share an endpoint or a pair is a
  // self-loop.
  explicit Matching(std::vector<NodePair> pairs);

  std::span<const NodePair> pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(NodeId u, NodeId v) const;
  std::optional<NodeId> partner(NodeId node) const;

  bool operator==(const Matching&) const = default;

 private:
  std::vector<NodePair> pairs_;  // sorted
};

// True if every matched pair exists as a reconfigurable candidate.
bool matching_fits(const HybridNetwork& net, const Matching& m);

// Directed reconfigurable link ids activated by a matching.
std::vector<LinkId> matched_links(const HybridNetwork& net, const Matching& m);

struct CommodityFlow {
  NodeId source = 0;
  NodeId target = 0;
  double demand = 0;
  std::map<LinkId, double> link_flow;  // positive entries only
};

struct PathFlow {
  int commodity = 0;  // index into Flow::commodities
  std::vector<LinkId> links;
  double amount = 0;
};

// Per-commodity link flows, optionally with a path decomposition.
struct Flow {
  std::vector<CommodityFlow> commodities;
  std::vector<PathFlow> paths;

  // Sum over commodities of the flow on each directed link.
  std::vector<double> aggregate(int num_links) const;
};

// Builds per-commodity link flows from explicit paths; the paths are kept.
Flow flow_from_paths(std::vector<CommodityFlow> commodities,
                     std::vector<PathFlow> paths);

struct CongestionReport {
  double lambda = 0;
  LinkId argmax_link = kNoLink;
  std::map<LinkId, double> per_link_loads;  // every usable directed link

  bool finite() const { return lambda < kInfinity; }
};

// Congestion of a flow routed on the static links plus the links of m.
// Throws kFlowUsesUnselectedReconfigurableLink or kNonConservedFlow.
// Positive flow on a zero-capacity link yields lambda = +inf.
CongestionReport congestion_of(const HybridNetwork& net, const Matching& m,
                               const Flow& f);

// Report with lambda = +inf and no loads, used when some commodity has no
// route.
CongestionReport unroutable_report();

// Result of auditing a flow against the demands it claims to serve.
struct FlowAudit {
  double max_conservation_residual = 0;  // interior nodes
  double max_demand_residual = 0;        // |net outflow at source - d|
  bool uses_unselected_link = false;
  bool segregated = true;   // each commodity: static-only or own link only
  bool single_path = true;  // each commodity supported on one simple path
  bool covers_demands = true;  // one commodity flow per positive demand

  bool valid(double tolerance = kAbsTolerance) const {
    return max_conservation_residual <= tolerance &&
           max_demand_residual <= tolerance && !uses_unselected_link &&
           covers_demands;
  }
};

FlowAudit audit_flow(const HybridNetwork& net, const DemandMatrix& d,
                     const Matching& m, const Flow& f);

}  // namespace hybridnet

#endif  // HYBRIDNET_MODEL_H
