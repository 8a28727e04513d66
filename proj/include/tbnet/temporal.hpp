#pragma once

// Temporal networks: a rank map strictly increasing along tree edges and
// constant across reticulation edges.

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "tbnet/network.hpp"

namespace tbnet {

struct TemporalMap {
  std::vector<int> rank;  // indexed by vertex id
};

inline bool is_valid_temporal_map(const PhyloNetwork& net, const TemporalMap& map) {
  if (map.rank.size() != net.vertex_count()) return false;
  for (const Edge& e : net.edges()) {
    const int a = map.rank[static_cast<std::size_t>(e.tail)];
    const int b = map.rank[static_cast<std::size_t>(e.head)];
    if (net.is_reticulation(e.head) ? a != b : a >= b) return false;
  }
  return true;
}

struct TemporalResult {
  bool temporal = false;
  std::optional<TemporalMap> map;
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Contracts each connected component of the reticulation-edge subgraph and
/// checks that tree edges between the contracted classes are acyclic. Ranks
/// are longest-path levels in the contracted graph, so a tree gets its depth.
inline TemporalResult is_temporal(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  detail::DisjointSets sets(n);
  for (const Edge& e : net.edges())
    if (net.is_reticulation(e.head)) sets.unite(static_cast<std::size_t>(e.tail), static_cast<std::size_t>(e.head));

  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const Edge& e : net.edges()) {
    if (net.is_reticulation(e.head)) continue;
    const std::size_t a = sets.find(static_cast<std::size_t>(e.tail));
    const std::size_t b = sets.find(static_cast<std::size_t>(e.head));
    if (a == b) return {};
    succ[a].push_back(b);
    ++indeg[b];
  }

  std::vector<std::size_t> queue;
  std::size_t classes = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (sets.find(v) != v) continue;
    ++classes;
    if (indeg[v] == 0) queue.push_back(v);
  }
  std::vector<int> level(n, 0);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t c = queue[head];
    for (std::size_t d : succ[c]) {
      level[d] = std::max(level[d], level[c] + 1);
      if (--indeg[d] == 0) queue.push_back(d);
    }
  }
  if (queue.size() != classes) return {};

  TemporalMap map;
  map.rank.resize(n);
  for (std::size_t v = 0; v < n; ++v) map.rank[v] = level[sets.find(v)];
  return {true, std::move(map)};
}

}  // namespace tbnet
