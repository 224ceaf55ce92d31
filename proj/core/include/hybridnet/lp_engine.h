#ifndef HYBRIDNET_LP_ENGINE_H
#define HYBRIDNET_LP_ENGINE_H

#include <map>
#include <vector>

#include "hybridnet/lp/linear_program.h"
#include "hybridnet/model.h"

namespace hybridnet {

using Path = std::vector<LinkId>;
// Candidate paths per commodity, aligned with DemandMatrix::commodities().
using PathSets = std::vector<std::vector<Path>>;

// A min-congestion LP together with the maps needed to read its solution
// back in network terms. Demands are divided by demand_scale before the
// program is built so that the largest demand is 1; solve_lp() undoes the
// scaling.
struct LpProblem {
  lp::LinearProgram program;
  int lambda_var = -1;
  std::vector<Commodity> commodities;
  double demand_scale = 1;

  // Matching variables, one per unordered pair (so z(i,j) == z(j,i) holds
  // by construction). Empty when the matching is not part of the program.
  std::vector<NodePair> z_pairs;
  std::vector<int> z_vars;

  // Link-based (compact) flow variables: per commodity, (link, variable).
  std::vector<std::vector<std::pair<LinkId, int>>> link_vars;
  // Path-based flow variables: per commodity, (path, variable).
  std::vector<std::vector<std::pair<Path, int>>> path_vars;

  bool path_based() const { return !path_vars.empty(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericalFailure };

const char* lp_status_name(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kNumericalFailure;
  double lambda_opt = kInfinity;
  std::map<NodePair, double> z;
  // Raw per-commodity flows in demand units, as returned by the solver.
  // For path-based programs the paths are filled in as well.
  Flow edge_flows;
  long iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
  double z_of(NodeId i, NodeId j) const;
};

// Compact relaxation of the segregated reconfiguration MILP: per-commodity
// link flows on static links, one z in [0, 1] per pair with demand in
// either direction, demand rows, static capacity rows, reconfigurable
// capacity rows and per-node degree rows.
LpProblem build_mcrn_lp(const HybridNetwork& net, const DemandMatrix& d);

// Same relaxation with each commodity restricted to the given static paths.
LpProblem build_mcrn_path_lp(const HybridNetwork& net, const DemandMatrix& d,
                             const PathSets& paths);

// Min-congestion multicommodity flow on the static links only.
LpProblem build_mcmf_lp(const HybridNetwork& net, const DemandMatrix& d);

// Min-congestion multicommodity flow on the static links plus the links of
// a matching, used freely by every commodity.
LpProblem build_routing_lp(const HybridNetwork& net, const DemandMatrix& d,
                           const Matching& m);

// Min-congestion flow restricted to explicit per-commodity paths (any mix of
// static and reconfigurable links).
LpProblem build_path_routing_lp(const HybridNetwork& net, const DemandMatrix& d,
                                const PathSets& paths);

// Solves with the built-in simplex unless another solver is given.
LpSolution solve_lp(const HybridNetwork& net, const LpProblem& problem);
LpSolution solve_lp(const HybridNetwork& net, const LpProblem& problem,
                    const lp::Solver& solver);

// Standard flow decomposition: every commodity becomes at most
// |links| simple source-target paths; cycles are dropped. The returned flow
// is rebuilt from the paths. Throws kNonConservedFlow if the input violates
// conservation by more than kAbsTolerance.
Flow decompose_paths(const HybridNetwork& net, const Flow& f);

// Path decomposition of one commodity's link flow; `noise` is the flow
// value below which a link is treated as empty. Amounts are not rescaled.
std::vector<PathFlow> extract_paths(const HybridNetwork& net,
                                    const CommodityFlow& flow, int commodity,
                                    double noise);

// Decomposes approximately conserved solver output (noise up to `noise`),
// or keeps its paths if it already has them, then scales each commodity's
// paths so that they deliver exactly the commodity's demand. Commodities
// without any path are left empty.
Flow clean_solver_flow(const HybridNetwork& net, const Flow& raw, double noise);

}  // namespace hybridnet

#endif  // HYBRIDNET_LP_ENGINE_H
