#ifndef HYBRIDNET_MAXFLOW_H
#define HYBRIDNET_MAXFLOW_H

#include <cstdint>
#include <vector>

namespace hybridnet {

// Integral s-t max flow by shortest augmenting paths (Edmonds-Karp).
class IntegerMaxFlow {
 public:
  explicit IntegerMaxFlow(int num_nodes) : adjacency_(num_nodes) {}

  // Returns the arc index; its residual twin is index ^ 1.
  int add_arc(int tail, int head, std::int64_t capacity);
  std::int64_t run(int source, int sink);
  std::int64_t flow_on(int arc) const { return flow_[arc]; }
  int head(int arc) const { return head_[arc]; }

 private:
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> head_;
  std::vector<std::int64_t> capacity_;
  std::vector<std::int64_t> flow_;
};

}  // namespace hybridnet

#endif  // HYBRIDNET_MAXFLOW_H
