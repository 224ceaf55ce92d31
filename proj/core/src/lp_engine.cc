#include "hybridnet/lp_engine.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "hybridnet/lp/simplex.h"

namespace hybridnet {
namespace {

struct BuildSpec {
  bool matching_vars = false;
  std::vector<bool> allowed;        // compact programs: usable links
  const PathSets* paths = nullptr;  // path programs
};

std::vector<bool> static_mask(const HybridNetwork& net) {
  std::vector<bool> mask(net.num_links(), false);
  for (LinkId id = 0; id < net.num_static_directed(); ++id) mask[id] = true;
  return mask;
}

bool path_usable(const HybridNetwork& net, const Path& path) {
  return !path.empty() &&
         std::all_of(path.begin(), path.end(), [&](LinkId id) {
           return net.link(id).capacity > 0;
         });
}

LpProblem build(const HybridNetwork& net, const DemandMatrix& d,
                const BuildSpec& spec) {
  LpProblem p;
  p.commodities = d.commodities();
  double scale = 0;
  for (const Commodity& c : p.commodities) scale = std::max(scale, c.demand);
  p.demand_scale = scale > 0 ? scale : 1.0;

  lp::LinearProgram& prog = p.program;
  p.lambda_var = prog.add_variable(0, lp::kUnbounded, 1.0, "lambda");

  std::map<NodePair, int> z_of_pair;
  if (spec.matching_vars) {
    for (const NodePair& pair : d.demand_pairs()) {
      if (net.reconfigurable_link(pair.u, pair.v) == kNoLink) continue;
      int var = prog.add_variable(
          0, 1, 0, "z_" + std::to_string(pair.u) + "_" + std::to_string(pair.v));
      z_of_pair[pair] = var;
      p.z_pairs.push_back(pair);
      p.z_vars.push_back(var);
    }
  }

  // Flow variables feeding each capacity row.
  std::vector<std::vector<int>> link_terms(net.num_links());
  const int n = net.num_nodes();
  if (spec.paths) {
    p.path_vars.resize(p.commodities.size());
  } else {
    p.link_vars.resize(p.commodities.size());
  }

  for (std::size_t k = 0; k < p.commodities.size(); ++k) {
    const Commodity& c = p.commodities[k];
    const double scaled = c.demand / p.demand_scale;
    const std::string tag = "c" + std::to_string(k);
    int demand_row =
        prog.add_row(lp::RowSense::kGreaterEqual, scaled, "demand_" + tag);
    auto z = z_of_pair.find(NodePair::of(c.source, c.target));
    if (z != z_of_pair.end()) prog.add_coefficient(demand_row, z->second, scaled);

    if (spec.paths) {
      for (const Path& path : (*spec.paths)[k]) {
        if (!path_usable(net, path)) continue;
        int var = prog.add_variable(
            0, lp::kUnbounded, 0,
            "p_" + tag + "_" + std::to_string(p.path_vars[k].size()));
        prog.add_coefficient(demand_row, var, 1.0);
        for (LinkId id : path) link_terms[id].push_back(var);
        p.path_vars[k].emplace_back(path, var);
      }
      continue;
    }

    // Conservation rows for every node other than the endpoints.
    std::vector<int> node_row(n, -1);
    for (NodeId v = 0; v < n; ++v) {
      if (v == c.source || v == c.target) continue;
      node_row[v] = prog.add_row(lp::RowSense::kEqual, 0,
                                 "cons_" + tag + "_v" + std::to_string(v));
    }
    node_row[c.source] = demand_row;
    for (LinkId id = 0; id < net.num_links(); ++id) {
      if (!spec.allowed[id] || net.link(id).capacity <= 0) continue;
      const DirectedLink& link = net.link(id);
      int var = prog.add_variable(
          0, lp::kUnbounded, 0, "f_" + tag + "_e" + std::to_string(id));
      if (node_row[link.tail] != -1) {
        prog.add_coefficient(node_row[link.tail], var, 1.0);
      }
      if (node_row[link.head] != -1) {
        prog.add_coefficient(node_row[link.head], var, -1.0);
      }
      link_terms[id].push_back(var);
      p.link_vars[k].emplace_back(id, var);
    }
  }

  // Link capacity rows, normalized by the capacity.
  for (LinkId id = 0; id < net.num_links(); ++id) {
    if (link_terms[id].empty()) continue;
    const double inv_capacity = 1.0 / net.link(id).capacity;
    int row = prog.add_row(lp::RowSense::kLessEqual, 0,
                           "cap_e" + std::to_string(id));
    for (int var : link_terms[id]) prog.add_coefficient(row, var, inv_capacity);
    prog.add_coefficient(row, p.lambda_var, -1.0);
  }

  // Reconfigurable capacity rows: z * d(i,j) <= lambda * c((i,j)).
  for (const auto& [pair, var] : z_of_pair) {
    for (auto [i, j] : {std::pair(pair.u, pair.v), std::pair(pair.v, pair.u)}) {
      const double demand = d.at(i, j);
      if (demand <= 0) continue;
      const double capacity = net.link(net.reconfigurable_link(i, j)).capacity;
      if (capacity <= 0) {
        prog.variable(var).upper = 0;
        continue;
      }
      int row = prog.add_row(
          lp::RowSense::kLessEqual, 0,
          "rcap_" + std::to_string(i) + "_" + std::to_string(j));
      prog.add_coefficient(row, var, demand / p.demand_scale / capacity);
      prog.add_coefficient(row, p.lambda_var, -1.0);
    }
  }

  // Degree bound: at most one reconfigurable link per node.
  std::vector<std::vector<int>> incident(n);
  for (const auto& [pair, var] : z_of_pair) {
    incident[pair.u].push_back(var);
    incident[pair.v].push_back(var);
  }
  for (NodeId v = 0; v < n; ++v) {
    if (incident[v].size() < 2) continue;  // z <= 1 already bounds it
    int row = prog.add_row(lp::RowSense::kLessEqual, 1.0,
                           "deg_" + std::to_string(v));
    for (int var : incident[v]) prog.add_coefficient(row, var, 1.0);
  }
  return p;
}

}  // namespace

const char* lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kUnbounded: return "Unbounded";
    case LpStatus::kNumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

double LpSolution::z_of(NodeId i, NodeId j) const {
  auto it = z.find(NodePair::of(i, j));
  return it == z.end() ? 0.0 : it->second;
}

LpProblem build_mcrn_lp(const HybridNetwork& net, const DemandMatrix& d) {
  BuildSpec spec;
  spec.matching_vars = true;
  spec.allowed = static_mask(net);
  return build(net, d, spec);
}

LpProblem build_mcrn_path_lp(const HybridNetwork& net, const DemandMatrix& d,
                             const PathSets& paths) {
  BuildSpec spec;
  spec.matching_vars = true;
  spec.paths = &paths;
  return build(net, d, spec);
}

LpProblem build_mcmf_lp(const HybridNetwork& net, const DemandMatrix& d) {
  BuildSpec spec;
  spec.allowed = static_mask(net);
  return build(net, d, spec);
}

LpProblem build_routing_lp(const HybridNetwork& net, const DemandMatrix& d,
                           const Matching& m) {
  BuildSpec spec;
  spec.allowed = static_mask(net);
  for (LinkId id : matched_links(net, m)) spec.allowed[id] = true;
  return build(net, d, spec);
}

LpProblem build_path_routing_lp(const HybridNetwork& net, const DemandMatrix& d,
                                const PathSets& paths) {
  BuildSpec spec;
  spec.paths = &paths;
  return build(net, d, spec);
}

LpSolution solve_lp(const HybridNetwork& net, const LpProblem& problem) {
  return solve_lp(net, problem, lp::SimplexSolver());
}

LpSolution solve_lp(const HybridNetwork& net, const LpProblem& problem,
                    const lp::Solver& solver) {
  (void)net;
  LpSolution out;
  lp::SolveResult result = solver.solve(problem.program);
  out.iterations = result.iterations;
  switch (result.status) {
    case lp::SolveStatus::kOptimal: out.status = LpStatus::kOptimal; break;
    case lp::SolveStatus::kInfeasible: out.status = LpStatus::kInfeasible; break;
    case lp::SolveStatus::kUnbounded: out.status = LpStatus::kUnbounded; break;
    case lp::SolveStatus::kNumericalFailure:
      out.status = LpStatus::kNumericalFailure;
      break;
  }
  if (!out.optimal()) return out;

  const double scale = problem.demand_scale;
  out.lambda_opt = result.values[problem.lambda_var] * scale;
  for (std::size_t i = 0; i < problem.z_pairs.size(); ++i) {
    out.z[problem.z_pairs[i]] =
        std::clamp(result.values[problem.z_vars[i]], 0.0, 1.0);
  }
  std::vector<CommodityFlow> commodities;
  for (const Commodity& c : problem.commodities) {
    commodities.push_back({c.source, c.target, c.demand, {}});
  }
  if (problem.path_based()) {
    std::vector<PathFlow> paths;
    for (std::size_t k = 0; k < problem.path_vars.size(); ++k) {
      for (const auto& [path, var] : problem.path_vars[k]) {
        double amount = result.values[var] * scale;
        if (amount > 0) paths.push_back({static_cast<int>(k), path, amount});
      }
    }
    out.edge_flows = flow_from_paths(std::move(commodities), std::move(paths));
  } else {
    for (std::size_t k = 0; k < problem.link_vars.size(); ++k) {
      for (const auto& [id, var] : problem.link_vars[k]) {
        double amount = result.values[var] * scale;
        if (amount > 0) commodities[k].link_flow[id] = amount;
      }
    }
    out.edge_flows.commodities = std::move(commodities);
  }
  return out;
}

std::vector<PathFlow> extract_paths(const HybridNetwork& net,
                                    const CommodityFlow& flow, int commodity,
                                    double noise) {
  std::map<LinkId, double> residual;
  std::map<NodeId, std::vector<LinkId>> out_links;
  for (const auto& [id, value] : flow.link_flow) {
    if (value <= noise) continue;
    residual[id] = value;
    out_links[net.link(id).tail].push_back(id);
  }

  std::vector<PathFlow> paths;
  std::vector<int> position(net.num_nodes(), -1);
  std::vector<LinkId> walk;
  std::vector<NodeId> nodes;

  auto reset_walk = [&] {
    for (NodeId v : nodes) position[v] = -1;
    walk.clear();
    nodes.assign(1, flow.source);
    position[flow.source] = 0;
  };
  // Subtracts the bottleneck along links[from..] and returns it.
  auto cancel = [&](std::size_t from) {
    double amount = kInfinity;
    std::size_t arg = from;
    for (std::size_t i = from; i < walk.size(); ++i) {
      if (residual[walk[i]] < amount) {
        amount = residual[walk[i]];
        arg = i;
      }
    }
    for (std::size_t i = from; i < walk.size(); ++i) {
      double& r = residual[walk[i]];
      r = (i == arg) ? 0.0 : r - amount;
      if (r <= noise) r = 0;
    }
    return amount;
  };

  if (flow.source == flow.target) return paths;
  reset_walk();
  while (true) {
    const NodeId at = nodes.back();
    if (at == flow.target) {
      double amount = cancel(0);
      paths.push_back({commodity, walk, amount});
      reset_walk();
      continue;
    }
    LinkId next = kNoLink;
    double best = 0;
    if (auto it = out_links.find(at); it != out_links.end()) {
      for (LinkId id : it->second) {
        double r = residual[id];
        if (r > best) {
          best = r;
          next = id;
        }
      }
    }
    if (next == kNoLink) {
      if (at == flow.source) break;
      // Flow enters this node but does not leave it: solver noise.
      residual[walk.back()] = 0;
      reset_walk();
      continue;
    }
    const NodeId head = net.link(next).head;
    walk.push_back(next);
    if (position[head] != -1) {
      // Cycle: cancel it and continue from where it closed.
      std::size_t start = position[head];
      cancel(start);
      for (std::size_t i = start + 1; i < nodes.size(); ++i) {
        position[nodes[i]] = -1;
      }
      nodes.resize(start + 1);
      walk.resize(start);
      continue;
    }
    position[head] = static_cast<int>(nodes.size());
    nodes.push_back(head);
  }
  return paths;
}

Flow decompose_paths(const HybridNetwork& net, const Flow& f) {
  std::vector<PathFlow> paths;
  for (std::size_t k = 0; k < f.commodities.size(); ++k) {
    const CommodityFlow& c = f.commodities[k];
    std::vector<double> balance(net.num_nodes(), 0.0);
    double largest = 0;
    for (const auto& [id, value] : c.link_flow) {
      balance[net.link(id).tail] += value;
      balance[net.link(id).head] -= value;
      largest = std::max(largest, value);
    }
    for (NodeId v = 0; v < net.num_nodes(); ++v) {
      if (v == c.source || v == c.target) continue;
      if (std::abs(balance[v]) > kAbsTolerance) {
        throw Error(ErrorCode::kNonConservedFlow,
                    "node " + std::to_string(v) + " imbalance " +
                        std::to_string(balance[v]));
      }
    }
    auto found = extract_paths(net, c, static_cast<int>(k), largest * 1e-15);
    paths.insert(paths.end(), found.begin(), found.end());
  }
  return flow_from_paths(f.commodities, std::move(paths));
}

Flow clean_solver_flow(const HybridNetwork& net, const Flow& raw,
                       double noise) {
  std::vector<PathFlow> paths;
  for (std::size_t k = 0; k < raw.commodities.size(); ++k) {
    const CommodityFlow& c = raw.commodities[k];
    std::vector<PathFlow> found;
    if (raw.paths.empty()) {
      found = extract_paths(net, c, static_cast<int>(k), noise);
    } else {
      for (const PathFlow& p : raw.paths) {
        if (p.commodity == static_cast<int>(k) && p.amount > noise) {
          found.push_back(p);
        }
      }
    }
    double total = 0;
    for (const PathFlow& p : found) total += p.amount;
    if (total <= 0) continue;
    const double factor = c.demand / total;
    for (PathFlow& p : found) p.amount *= factor;
    paths.insert(paths.end(), found.begin(), found.end());
  }
  return flow_from_paths(raw.commodities, std::move(paths));
}

}  // namespace hybridnet
