#ifndef HYBRIDNET_ROUNDING_H
#define HYBRIDNET_ROUNDING_H

#include <cstdint>

#include "hybridnet/model.h"

namespace hybridnet {

// Rounds needed for the best-of-trials outcome to be within the usual
// logarithmic factor w.h.p.: ceil(log2(max(m, 2))) + 3 for m static links.
int default_trials(int num_static_links);

// Randomized path rounding. Every commodity of `fractional` (which must carry
// a path decomposition) independently keeps one of its paths, chosen with
// probability proportional to the path amounts, and sends its whole demand
// there. `fixed` is flow that stays as it is (it contributes to the loads).
// Repeats `trials` rounds, each from its own stream derived from `seed`, and
// returns the rounding with the lowest congestion; ties go to the earlier
// round. The result holds the commodities of `fractional` only.
Flow randomized_path_rounding(const HybridNetwork& net, const Flow& fractional,
                              const Flow& fixed, int trials,
                              std::uint64_t seed);

}  // namespace hybridnet

#endif  // HYBRIDNET_ROUNDING_H
