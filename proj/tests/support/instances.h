#ifndef HYBRIDNET_TESTS_SUPPORT_INSTANCES_H
#define HYBRIDNET_TESTS_SUPPORT_INSTANCES_H

// Random small instances for property tests.

#include <cstdint>
#include <utility>
#include <vector>

#include "hybridnet/model.h"
#include "hybridnet/random.h"
#include "hybridnet/workloads.h"

namespace testing_support {

using namespace hybridnet;

struct SmallInstance {
  HybridNetwork net;
  DemandMatrix demands;
};

// A valid (n, k) pair for a connected k-regular graph with small n.
inline std::pair<int, int> pick_shape(Rng& rng, int min_n, int max_n,
                                      std::vector<int> degrees) {
  while (true) {
    int n = min_n + static_cast<int>(rng.uniform_int(max_n - min_n + 1));
    int k = degrees[rng.uniform_int(degrees.size())];
    if (k < n && (n * k) % 2 == 0) return {n, k};
  }
}

// k-regular static topology with integer capacities in [1, max_cap] per
// direction and a complete reconfigurable set with capacities in
// [0, max_cap] (0 marks a pair that cannot be used).
inline HybridNetwork random_network(int n, int k, std::uint64_t seed, int max_cap = 3,
                                    bool allow_zero_reconfig = true) {
  HybridNetwork shape = gen_k_regular(n, k, seed);
  Rng rng(derive_seed(seed, 77));
  NetworkBuilder builder(n);
  for (const auto& link : shape.static_links()) {
    builder.add_static(link.a, link.b, 1 + static_cast<double>(rng.uniform_int(max_cap)),
                       1 + static_cast<double>(rng.uniform_int(max_cap)));
  }
  const int low = allow_zero_reconfig ? 0 : 1;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      auto draw = [&] {
        return static_cast<double>(low + static_cast<int>(rng.uniform_int(max_cap + 1 - low)));
      };
      double forward = draw();
      builder.add_reconfigurable(u, v, forward, draw());
    }
  }
  return builder.build();
}

// `count` distinct ordered pairs with integer demands in [1, max_demand].
inline DemandMatrix random_demands(int n, int count, std::uint64_t seed,
                                   int max_demand = 10) {
  Rng rng(seed);
  DemandMatrix d(n);
  int guard = 0;
  while (static_cast<int>(d.size()) < count && guard++ < 10000) {
    NodeId s = static_cast<NodeId>(rng.uniform_int(n));
    NodeId t = static_cast<NodeId>(rng.uniform_int(n));
    if (s == t || d.at(s, t) > 0) continue;
    d.set(s, t, 1 + static_cast<double>(rng.uniform_int(max_demand)));
  }
  return d;
}

inline SmallInstance random_instance(int n, int k, int commodities, std::uint64_t seed) {
  return {random_network(n, k, seed), random_demands(n, commodities, derive_seed(seed, 5))};
}

// Uniform-capacity network: every static and reconfigurable direction has
// capacity c.
inline HybridNetwork uniform_network(int n, int k, std::uint64_t seed, double c = 1) {
  return gen_k_regular(n, k, seed, c);
}

}  // namespace testing_support

#endif  // HYBRIDNET_TESTS_SUPPORT_INSTANCES_H
