#ifndef HYBRIDNET_LP_SIMPLEX_H
#define HYBRIDNET_LP_SIMPLEX_H

#include "hybridnet/lp/linear_program.h"

namespace hybridnet::lp {

struct SimplexOptions {
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  // Residual accepted when the final point is checked against the program.
  double acceptance_tolerance = 1e-7;
  int refactor_interval = 100;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_limit = 50;
  long max_iterations = 0;  // 0: 200 * (rows + columns) + 1000
};

// Bounded-variable primal revised simplex with an explicit dense basis
// inverse, two phases, Harris ratio test and a Bland's rule fallback on
// degenerate stalls. Intended for instances with at most a few thousand
// rows.
class SimplexSolver : public Solver {
 public:
  SimplexSolver() = default;
  explicit SimplexSolver(SimplexOptions options) : options_(options) {}

  SolveResult solve(const LinearProgram& program) const override;

 private:
  SimplexOptions options_;
};

}  // namespace hybridnet::lp

#endif  // HYBRIDNET_LP_SIMPLEX_H
