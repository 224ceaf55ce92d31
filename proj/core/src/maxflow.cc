#include "hybridnet/maxflow.h"

#include <algorithm>
#include <deque>
#include <limits>

namespace hybridnet {

int IntegerMaxFlow::add_arc(int tail, int head, std::int64_t capacity) {
  int id = static_cast<int>(head_.size());
  head_.push_back(head);
  capacity_.push_back(capacity);
  flow_.push_back(0);
  adjacency_[tail].push_back(id);
  head_.push_back(tail);
  capacity_.push_back(0);
  flow_.push_back(0);
  adjacency_[head].push_back(id + 1);
  return id;
}

std::int64_t IntegerMaxFlow::run(int source, int sink) {
  std::int64_t total = 0;
  if (source == sink) return total;
  const int n = static_cast<int>(adjacency_.size());
  std::vector<int> via(n);
  while (true) {
    std::fill(via.begin(), via.end(), -1);
    std::deque<int> queue{source};
    via[source] = -2;
    while (!queue.empty() && via[sink] == -1) {
      int v = queue.front();
      queue.pop_front();
      for (int arc : adjacency_[v]) {
        int w = head_[arc];
        if (via[w] != -1 || capacity_[arc] - flow_[arc] <= 0) continue;
        via[w] = arc;
        queue.push_back(w);
      }
    }
    if (via[sink] == -1) return total;
    std::int64_t push = std::numeric_limits<std::int64_t>::max();
    for (int v = sink; v != source; v = head_[via[v] ^ 1]) {
      push = std::min(push, capacity_[via[v]] - flow_[via[v]]);
    }
    for (int v = sink; v != source; v = head_[via[v] ^ 1]) {
      flow_[via[v]] += push;
      flow_[via[v] ^ 1] -= push;
    }
    total += push;
  }
}

}  // namespace hybridnet
