#ifndef HYBRIDNET_NONSEGREGATED_H
#define HYBRIDNET_NONSEGREGATED_H

#include <cstdint>
#include <optional>
#include <string_view>

#include "hybridnet/model.h"

namespace hybridnet {

// Routing models: segregated or not, splittable or not.
enum class Tau { kSS, kUS, kSN, kUN };

const char* tau_name(Tau tau);  // "SS", "US", ...
std::optional<Tau> parse_tau(std::string_view text);  // case-insensitive
inline bool is_segregated(Tau tau) { return tau == Tau::kSS || tau == Tau::kUS; }
inline bool is_splittable(Tau tau) { return tau == Tau::kSS || tau == Tau::kSN; }

struct EvalSpec {
  Tau tau = Tau::kSS;
  // 0 means unlimited; k > 0 restricts every commodity to its k shortest
  // paths (by hops) in the graph it may use.
  int path_limit = 0;
  // Randomized rounding rounds for unsplittable models with path_limit != 1;
  // 0 picks default_trials().
  int trials = 0;
  std::uint64_t seed = 0;
};

struct Routing {
  Flow flow;
  CongestionReport report;
};

// Routes d given the matching m under spec. Segregated models put each
// matched commodity on its own reconfigurable link and everything else on
// static links; non-segregated models route every commodity over the static
// links plus the links of m. If some commodity has no usable route the
// report is unroutable_report() and the flow is empty.
Routing route_matching(const HybridNetwork& net, const DemandMatrix& d,
                       const Matching& m, const EvalSpec& spec);

CongestionReport eval_matching(const HybridNetwork& net, const DemandMatrix& d,
                               const Matching& m, const EvalSpec& spec);

struct SingleCommodityResult {
  Matching matching;
  CongestionReport report;
  Flow flow;
  std::int64_t max_flow_units = 0;
  // False if the search hit its node budget before closing the gap.
  bool proven_optimal = true;
};

// Exact optimum for one commodity under uniform capacities: a branch and
// bound over matchings that maximizes the s-t max flow of N(M), seeded with
// the greedy augmenting matching. lambda = d / (a * max flow). The search
// gives up proving optimality after `node_budget` max-flow evaluations.
// Throws kNotSingleCommodity or kNonUniformCapacities.
SingleCommodityResult solve_single_commodity_uniform(
    const HybridNetwork& net, const DemandMatrix& d,
    long node_budget = 200000);

// The greedy matching alone: repeatedly add the candidate pair that raises
// the s-t max flow most, until nothing helps. Not optimal in general.
Matching greedy_augmenting_matching(const HybridNetwork& net,
                                    const DemandMatrix& d);

struct ExactResult {
  Matching matching;
  CongestionReport report;
  Flow flow;
};

// Exhaustive optimum over all matchings (demand pairs for segregated models,
// all candidate pairs otherwise) with exact routing: LPs for splittable
// models, enumeration of simple-path assignments for unsplittable ones.
// Ignores spec.path_limit. Throws kInstanceTooLarge if the network has more
// than node_limit nodes or a matching admits more than 10^6 path
// assignments.
ExactResult brute_force_opt(const HybridNetwork& net, const DemandMatrix& d,
                            const EvalSpec& spec, int node_limit = 8);

}  // namespace hybridnet

#endif  // HYBRIDNET_NONSEGREGATED_H
