#ifndef HYBRIDNET_SEGREGATED_H
#define HYBRIDNET_SEGREGATED_H

#include <cstdint>

#include "hybridnet/lp_engine.h"
#include "hybridnet/model.h"

namespace hybridnet {

struct SegregatedOptions {
  // 0 routes static flow over every static path (compact program); k > 0
  // restricts each commodity to its k shortest static paths.
  int path_limit = 0;
  // Solver for the linear programs; the built-in simplex if null.
  const lp::Solver* solver = nullptr;
};

struct RoundedSolution {
  Matching matching;
  Flow flow;
  double lambda = 0;
  // Optimum of the relaxation the solution was rounded from.
  double lp_lower_bound = 0;
  CongestionReport report;
};

// Keeps exactly the pairs with z > 1/2.
Matching round_matching(const LpSolution& sol);

// Matched commodities move onto their reconfigurable link; the static paths
// of the others are scaled by 1 / (1 - z) so that they carry the whole
// demand. Throws kDivisionGuard if an unmatched pair has z ~ 1.
Flow rescale_flows(const HybridNetwork& net, const LpSolution& sol,
                   const Matching& m);

// LP rounding for segregated splittable routing; lambda is at most twice
// the relaxation optimum.
RoundedSolution solve_ss(const HybridNetwork& net, const DemandMatrix& d,
                         const SegregatedOptions& options = {});

// Two stages: the matching of solve_ss, then randomized rounding of a
// static min-congestion flow for the demands it leaves unmatched.
RoundedSolution solve_us(const HybridNetwork& net, const DemandMatrix& d,
                         int trials, std::uint64_t seed,
                         const SegregatedOptions& options = {});

// Exact segregated splittable optimum when all demand leaves one node (or
// enters one node): at most one reconfigurable link can touch it, so each
// candidate link plus the empty matching is tried. Throws kNotSingleSource.
RoundedSolution solve_single_source_ss(const HybridNetwork& net,
                                       const DemandMatrix& d,
                                       const SegregatedOptions& options = {});

}  // namespace hybridnet

#endif  // HYBRIDNET_SEGREGATED_H
