#ifndef HYBRIDNET_TESTS_ORACLES_CONGESTION_H
#define HYBRIDNET_TESTS_ORACLES_CONGESTION_H

// Independent congestion oracles built directly from the network model:
// their own LP formulations (solved by the tableau oracle), exhaustive
// matching enumeration, an Edmonds-Karp max-flow and a flow checker.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>
#include <vector>

#include "hybridnet/model.h"
#include "tableau_lp.h"

namespace oracle {

using hybridnet::DemandMatrix;
using hybridnet::HybridNetwork;
using hybridnet::LinkId;
using hybridnet::Matching;
using hybridnet::NodeId;
using hybridnet::NodePair;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Optimal value, +inf when infeasible; throws if the oracle itself failed.
inline double objective_or_throw(const TableauResult& r) {
  if (r.status == TableauStatus::kOptimal) return r.objective;
  if (r.status == TableauStatus::kInfeasible) return kInf;
  throw std::runtime_error("tableau oracle did not produce a verified optimum");
}

// Capacity of the directed reconfigurable candidate u->v (0 if absent).
inline double reconfig_capacity(const HybridNetwork& net, NodeId u, NodeId v) {
  for (const auto& link : net.reconfigurable_links()) {
    if (link.a == u && link.b == v) return link.capacity_forward;
    if (link.a == v && link.b == u) return link.capacity_backward;
  }
  return 0;
}

struct Arc {
  NodeId tail;
  NodeId head;
  double capacity;
};

inline std::vector<Arc> static_arcs(const HybridNetwork& net) {
  std::vector<Arc> arcs;
  for (const auto& link : net.static_links()) {
    arcs.push_back({link.a, link.b, link.capacity_forward});
    arcs.push_back({link.b, link.a, link.capacity_backward});
  }
  return arcs;
}

// Fractional relaxation of the segregated problem: static link flows per
// commodity, one z per demand pair shared by both directions.
inline double mcrn_relaxation(const HybridNetwork& net, const DemandMatrix& d) {
  if (d.empty()) return 0;
  const int n = net.num_nodes();
  auto arcs = static_arcs(net);
  TableauLp lp;
  int lambda = lp.add_var(1);
  std::map<std::pair<NodeId, NodeId>, int> zvar;
  for (auto [key, demand] : d.entries()) {
    auto pair = std::minmax(key.first, key.second);
    if (!zvar.contains(pair)) zvar[pair] = lp.add_var(0);
  }
  std::vector<std::vector<std::pair<int, double>>> load(arcs.size());
  for (auto [key, demand] : d.entries()) {
    auto [s, t] = key;
    int z = zvar[std::minmax(s, t)];
    std::vector<int> f(arcs.size());
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      f[a] = lp.add_var(0);
      load[a].push_back({f[a], 1.0});
    }
    for (NodeId v = 0; v < n; ++v) {
      if (v == t) continue;
      std::vector<std::pair<int, double>> row;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        if (arcs[a].tail == v) row.push_back({f[a], 1.0});
        if (arcs[a].head == v) row.push_back({f[a], -1.0});
      }
      if (v == s) {
        row.push_back({z, demand});
        lp.add_row(row, RowSense::kEq, demand);
      } else {
        lp.add_row(row, RowSense::kEq, 0);
      }
    }
    // Reconfigurable direction s->t carries z * demand.
    lp.add_row({{z, demand}, {lambda, -reconfig_capacity(net, s, t)}}, RowSense::kLe, 0);
  }
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    auto row = load[a];
    row.push_back({lambda, -arcs[a].capacity});
    lp.add_row(row, RowSense::kLe, 0);
  }
  for (auto [pair, z] : zvar) lp.add_row({{z, 1.0}}, RowSense::kLe, 1);
  for (NodeId v = 0; v < n; ++v) {
    std::vector<std::pair<int, double>> row;
    for (auto [pair, z] : zvar) {
      if (pair.first == v || pair.second == v) row.push_back({z, 1.0});
    }
    if (!row.empty()) lp.add_row(row, RowSense::kLe, 1);
  }
  TableauResult r = solve_tableau(lp);
  return objective_or_throw(r);
}

// Min-congestion splittable routing of d over the given arcs.
inline double mcmf(int n, const std::vector<Arc>& arcs, const DemandMatrix& d) {
  if (d.empty()) return 0;
  TableauLp lp;
  int lambda = lp.add_var(1);
  std::vector<std::vector<std::pair<int, double>>> load(arcs.size());
  for (auto [key, demand] : d.entries()) {
    auto [s, t] = key;
    std::vector<int> f(arcs.size());
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      f[a] = lp.add_var(0);
      load[a].push_back({f[a], 1.0});
    }
    for (NodeId v = 0; v < n; ++v) {
      if (v == t) continue;
      std::vector<std::pair<int, double>> row;
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        if (arcs[a].tail == v) row.push_back({f[a], 1.0});
        if (arcs[a].head == v) row.push_back({f[a], -1.0});
      }
      lp.add_row(row, RowSense::kEq, v == s ? demand : 0);
    }
  }
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    auto row = load[a];
    row.push_back({lambda, -arcs[a].capacity});
    lp.add_row(row, RowSense::kLe, 0);
  }
  TableauResult r = solve_tableau(lp);
  return objective_or_throw(r);
}

// Segregated splittable congestion of a fixed matching: matched commodities
// ride their own link, the rest share the static links.
inline double segregated_lambda(const HybridNetwork& net, const DemandMatrix& d,
                                const Matching& m) {
  double worst = 0;
  DemandMatrix rest(d.num_nodes());
  for (auto [key, demand] : d.entries()) {
    auto [s, t] = key;
    if (m.contains(s, t)) {
      double c = reconfig_capacity(net, s, t);
      worst = std::max(worst, c > 0 ? demand / c : kInf);
    } else {
      rest.set(s, t, demand);
    }
  }
  return std::max(worst, mcmf(net.num_nodes(), static_arcs(net), rest));
}

// Non-segregated splittable congestion: static links plus matched links,
// shared by every commodity.
inline double shared_lambda(const HybridNetwork& net, const DemandMatrix& d,
                            const Matching& m) {
  auto arcs = static_arcs(net);
  for (NodePair p : m.pairs()) {
    arcs.push_back({p.u, p.v, reconfig_capacity(net, p.u, p.v)});
    arcs.push_back({p.v, p.u, reconfig_capacity(net, p.v, p.u)});
  }
  return mcmf(net.num_nodes(), arcs, d);
}

// Calls fn on every matching (including the empty one) over the pairs.
inline void for_each_matching(const std::vector<NodePair>& pairs,
                              const std::function<void(const std::vector<NodePair>&)>& fn) {
  std::vector<NodePair> chosen;
  std::set<NodeId> used;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == pairs.size()) {
      fn(chosen);
      return;
    }
    rec(i + 1);
    NodePair p = pairs[i];
    if (used.contains(p.u) || used.contains(p.v)) return;
    used.insert(p.u);
    used.insert(p.v);
    chosen.push_back(p);
    rec(i + 1);
    chosen.pop_back();
    used.erase(p.u);
    used.erase(p.v);
  };
  rec(0);
}

// Reconfigurable pairs with positive capacity in some direction.
inline std::vector<NodePair> usable_pairs(const HybridNetwork& net) {
  std::vector<NodePair> out;
  for (const auto& link : net.reconfigurable_links()) {
    if (link.capacity_forward > 0 || link.capacity_backward > 0) {
      out.push_back(NodePair::of(link.a, link.b));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline double exhaustive_segregated_opt(const HybridNetwork& net, const DemandMatrix& d) {
  std::vector<NodePair> pairs;
  for (NodePair p : d.demand_pairs()) {
    if (reconfig_capacity(net, p.u, p.v) > 0 || reconfig_capacity(net, p.v, p.u) > 0) {
      pairs.push_back(p);
    }
  }
  double best = kInf;
  for_each_matching(pairs, [&](const std::vector<NodePair>& chosen) {
    best = std::min(best, segregated_lambda(net, d, Matching(chosen)));
  });
  return best;
}

inline double exhaustive_shared_opt(const HybridNetwork& net, const DemandMatrix& d) {
  double best = kInf;
  for_each_matching(usable_pairs(net), [&](const std::vector<NodePair>& chosen) {
    best = std::min(best, shared_lambda(net, d, Matching(chosen)));
  });
  return best;
}

// Edmonds-Karp on a capacity matrix.
inline double max_flow(std::vector<std::vector<double>> cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  double total = 0;
  while (true) {
    std::vector<int> parent(n, -1);
    parent[s] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && parent[t] < 0) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v) {
        if (parent[v] < 0 && cap[u][v] > 1e-12) {
          parent[v] = u;
          q.push(v);
        }
      }
    }
    if (parent[t] < 0) return total;
    double push = kInf;
    for (int v = t; v != s; v = parent[v]) push = std::min(push, cap[parent[v]][v]);
    for (int v = t; v != s; v = parent[v]) {
      cap[parent[v]][v] -= push;
      cap[v][parent[v]] += push;
    }
    total += push;
  }
}

// s-t max-flow value over static links plus the links of m.
inline double matching_max_flow(const HybridNetwork& net, const Matching& m, NodeId s,
                                NodeId t) {
  const int n = net.num_nodes();
  std::vector<std::vector<double>> cap(n, std::vector<double>(n, 0));
  for (const Arc& a : static_arcs(net)) cap[a.tail][a.head] += a.capacity;
  for (NodePair p : m.pairs()) {
    cap[p.u][p.v] += reconfig_capacity(net, p.u, p.v);
    cap[p.v][p.u] += reconfig_capacity(net, p.v, p.u);
  }
  return max_flow(std::move(cap), s, t);
}

struct FlowCheck {
  double conservation = 0;  // worst interior imbalance
  double demand = 0;        // worst |net source outflow - d|
  bool covers = true;       // exactly one flow per positive demand
  bool allowed_links = true;
  bool segregated = true;
  bool single_path = true;
};

// Checks a flow from its per-commodity link maps only.
inline FlowCheck check_flow(const HybridNetwork& net, const DemandMatrix& d,
                            const Matching& m, const hybridnet::Flow& f) {
  FlowCheck out;
  std::map<std::pair<NodeId, NodeId>, int> seen;
  for (const auto& c : f.commodities) seen[{c.source, c.target}]++;
  for (auto [key, demand] : d.entries()) {
    if (seen[key] != 1) out.covers = false;
  }
  if (seen.size() != d.size()) out.covers = false;
  for (const auto& c : f.commodities) {
    std::vector<double> net_out(net.num_nodes(), 0);
    bool uses_static = false;
    bool uses_reconfig = false;
    for (auto [id, amount] : c.link_flow) {
      const auto& link = net.link(id);
      net_out[link.tail] += amount;
      net_out[link.head] -= amount;
      if (net.is_static(id)) {
        uses_static = true;
      } else {
        if (!m.contains(link.tail, link.head)) out.allowed_links = false;
        if (link.tail != c.source || link.head != c.target) out.segregated = false;
        uses_reconfig = true;
      }
    }
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      if (v == c.source || v == c.target) continue;
      out.conservation = std::max(out.conservation, std::abs(net_out[v]));
    }
    out.demand = std::max(out.demand, std::abs(net_out[c.source] - d.at(c.source, c.target)));
    if (uses_static && uses_reconfig) out.segregated = false;
    // Single path: walk from the source along the unique outgoing link.
    std::map<NodeId, int> out_degree;
    std::map<NodeId, LinkId> next;
    for (auto [id, amount] : c.link_flow) {
      out_degree[net.link(id).tail]++;
      next[net.link(id).tail] = id;
    }
    std::set<NodeId> visited;
    NodeId v = c.source;
    std::size_t steps = 0;
    while (v != c.target) {
      if (out_degree[v] != 1 || visited.contains(v)) {
        out.single_path = false;
        break;
      }
      visited.insert(v);
      v = net.link(next[v]).head;
      ++steps;
    }
    if (out.single_path && steps != c.link_flow.size()) out.single_path = false;
  }
  return out;
}

}  // namespace oracle

#endif  // HYBRIDNET_TESTS_ORACLES_CONGESTION_H
