#pragma once

// Small integral max-flow used for Menger-style disjoint path questions.
// Augmenting paths by BFS; with unit capacities on a graph of n nodes the
// flow value is at most n, so this is O(n * m).

#include <algorithm>
#include <limits>
#include <vector>

namespace tbnet::detail {

class FlowNetwork {
 public:
  struct Arc {
    int to;
    int rev;
    int cap;
    int original;  // 0 for residual back-arcs

    int flow() const { return original - cap; }
  };

  explicit FlowNetwork(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  /// Returns the index of the forward arc within adj(from).
  int add_arc(int from, int to, int cap) {
    auto& a = adj_[static_cast<std::size_t>(from)];
    auto& b = adj_[static_cast<std::size_t>(to)];
    a.push_back({to, static_cast<int>(b.size()), cap, cap});
    b.push_back({from, static_cast<int>(a.size()) - 1, 0, 0});
    return static_cast<int>(a.size()) - 1;
  }

  int max_flow(int source, int sink, int limit = std::numeric_limits<int>::max()) {
    int total = 0;
    std::vector<int> prev_node(adj_.size()), prev_arc(adj_.size());
    while (total < limit) {
      std::fill(prev_node.begin(), prev_node.end(), -1);
      prev_node[static_cast<std::size_t>(source)] = source;
      std::vector<int> queue{source};
      for (std::size_t head = 0; head < queue.size() && prev_node[static_cast<std::size_t>(sink)] < 0; ++head) {
        const int u = queue[head];
        const auto& arcs = adj_[static_cast<std::size_t>(u)];
        for (std::size_t i = 0; i < arcs.size(); ++i) {
          const Arc& a = arcs[i];
          if (a.cap > 0 && prev_node[static_cast<std::size_t>(a.to)] < 0) {
            prev_node[static_cast<std::size_t>(a.to)] = u;
            prev_arc[static_cast<std::size_t>(a.to)] = static_cast<int>(i);
            queue.push_back(a.to);
          }
        }
      }
      if (prev_node[static_cast<std::size_t>(sink)] < 0) break;
      int push = limit - total;
      for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)])
        push = std::min(push, arc(prev_node[static_cast<std::size_t>(v)], prev_arc[static_cast<std::size_t>(v)]).cap);
      for (int v = sink; v != source; v = prev_node[static_cast<std::size_t>(v)]) {
        Arc& a = arc(prev_node[static_cast<std::size_t>(v)], prev_arc[static_cast<std::size_t>(v)]);
        a.cap -= push;
        adj_[static_cast<std::size_t>(a.to)][static_cast<std::size_t>(a.rev)].cap += push;
      }
      total += push;
    }
    return total;
  }

  const std::vector<Arc>& adj(int u) const { return adj_[static_cast<std::size_t>(u)]; }
  Arc& arc(int u, int i) { return adj_[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)]; }

 private:
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace tbnet::detail
