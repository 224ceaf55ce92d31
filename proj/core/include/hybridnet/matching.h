#ifndef HYBRIDNET_MATCHING_H
#define HYBRIDNET_MATCHING_H

#include <vector>

namespace hybridnet {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double weight = 0;
};

// Maximum-weight matching in a general graph (Edmonds' blossom algorithm
// with dual variables, O(n^3)). Returns the mate of every vertex, -1 for
// unmatched ones. Integer-valued weights are handled exactly; other weights
// use a small relative tolerance on slack comparisons. Edges with weight
// <= 0 never improve the objective and may be left out.
std::vector<int> blossom_matching(int num_vertices,
                                  const std::vector<WeightedEdge>& edges);

}  // namespace hybridnet

#endif  // HYBRIDNET_MATCHING_H
