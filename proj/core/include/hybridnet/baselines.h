#ifndef HYBRIDNET_BASELINES_H
#define HYBRIDNET_BASELINES_H

#include "hybridnet/model.h"
#include "hybridnet/nonsegregated.h"

namespace hybridnet {

// Congestion of the static network alone (empty matching).
CongestionReport oblivious(const HybridNetwork& net, const DemandMatrix& d,
                           const EvalSpec& spec);

// Weight of a candidate pair: d(i,j) + d(j,i).
double pair_weight(const DemandMatrix& d, NodePair pair);
double matching_weight(const DemandMatrix& d, const Matching& m);

// Exact maximum-weight matching over candidate pairs with positive weight.
Matching max_weight_matching(const HybridNetwork& net, const DemandMatrix& d);

// Repeatedly takes the heaviest candidate pair whose endpoints are both
// free (ties by the smaller pair) until no positive-weight pair fits.
Matching greedy_matching(const HybridNetwork& net, const DemandMatrix& d);

}  // namespace hybridnet

#endif  // HYBRIDNET_BASELINES_H
