#pragma once

// Bipartite graphs over network vertices and maximum-cardinality matching.

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tbnet/network.hpp"

namespace tbnet {

/// Bipartite graph whose sides carry back-references to network vertices.
/// Adjacency is stored left-to-right in compressed rows, sorted by right index.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// `edges` are (left index, right index) pairs. Throws std::invalid_argument
  /// on out-of-range endpoints or duplicates.
  BipartiteGraph(std::vector<VertexId> left, std::vector<VertexId> right,
                 std::vector<std::pair<int, int>> edges)
      : left_(std::move(left)), right_(std::move(right)) {
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw std::invalid_argument("duplicate bipartite edge");
    offsets_.assign(left_.size() + 1, 0);
    targets_.reserve(edges.size());
    for (auto [l, r] : edges) {
      if (l < 0 || static_cast<std::size_t>(l) >= left_.size() || r < 0 ||
          static_cast<std::size_t>(r) >= right_.size())
        throw std::invalid_argument("bipartite edge endpoint out of range");
      ++offsets_[static_cast<std::size_t>(l) + 1];
      targets_.push_back(r);
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  }

  std::size_t left_size() const { return left_.size(); }
  std::size_t right_size() const { return right_.size(); }
  std::size_t edge_count() const { return targets_.size(); }

  VertexId left_vertex(int l) const { return left_[static_cast<std::size_t>(l)]; }
  VertexId right_vertex(int r) const { return right_[static_cast<std::size_t>(r)]; }
  std::span<const VertexId> left_vertices() const { return left_; }
  std::span<const VertexId> right_vertices() const { return right_; }

  std::span<const int> neighbours(int l) const {
    const auto i = static_cast<std::size_t>(l);
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  bool has_edge(int l, int r) const {
    auto nb = neighbours(l);
    return std::binary_search(nb.begin(), nb.end(), r);
  }

  /// Right-to-left adjacency, rows sorted by left index.
  std::vector<std::vector<int>> reverse_adjacency() const {
    std::vector<std::vector<int>> rev(right_.size());
    for (std::size_t l = 0; l < left_.size(); ++l)
      for (int r : neighbours(static_cast<int>(l))) rev[static_cast<std::size_t>(r)].push_back(static_cast<int>(l));
    return rev;
  }

 private:
  std::vector<VertexId> left_;
  std::vector<VertexId> right_;
  std::vector<std::size_t> offsets_;
  std::vector<int> targets_;
};

inline constexpr int kUnmatched = -1;

class Matching {
 public:
  Matching() = default;
  Matching(std::size_t left, std::size_t right) : left_mate_(left, kUnmatched), right_mate_(right, kUnmatched) {}

  int left_mate(int l) const { return left_mate_[static_cast<std::size_t>(l)]; }
  int right_mate(int r) const { return right_mate_[static_cast<std::size_t>(r)]; }

  void match(int l, int r) {
    left_mate_[static_cast<std::size_t>(l)] = r;
    right_mate_[static_cast<std::size_t>(r)] = l;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(
        std::count_if(left_mate_.begin(), left_mate_.end(), [](int m) { return m != kUnmatched; }));
  }

  std::vector<std::pair<int, int>> pairs() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t l = 0; l < left_mate_.size(); ++l)
      if (left_mate_[l] != kUnmatched) out.emplace_back(static_cast<int>(l), left_mate_[l]);
    return out;
  }

  std::vector<int> unmatched_left() const { return unmatched(left_mate_); }
  std::vector<int> unmatched_right() const { return unmatched(right_mate_); }

  /// Pairs are graph edges and both mate arrays agree.
  bool is_valid_for(const BipartiteGraph& g) const {
    if (left_mate_.size() != g.left_size() || right_mate_.size() != g.right_size()) return false;
    for (std::size_t l = 0; l < left_mate_.size(); ++l) {
      const int r = left_mate_[l];
      if (r == kUnmatched) continue;
      if (r < 0 || static_cast<std::size_t>(r) >= right_mate_.size()) return false;
      if (right_mate_[static_cast<std::size_t>(r)] != static_cast<int>(l)) return false;
      if (!g.has_edge(static_cast<int>(l), r)) return false;
    }
    for (std::size_t r = 0; r < right_mate_.size(); ++r) {
      const int l = right_mate_[r];
      if (l != kUnmatched && left_mate_[static_cast<std::size_t>(l)] != static_cast<int>(r)) return false;
    }
    return true;
  }

 private:
  static std::vector<int> unmatched(const std::vector<int>& mates) {
    std::vector<int> out;
    for (std::size_t i = 0; i < mates.size(); ++i)
      if (mates[i] == kUnmatched) out.push_back(static_cast<int>(i));
    return out;
  }

  std::vector<int> left_mate_;
  std::vector<int> right_mate_;
};

/// Hopcroft-Karp. Free left vertices are processed in ascending index order
/// and neighbours are scanned in ascending order, so the result depends only
/// on the graph.
inline Matching max_matching(const BipartiteGraph& g) {
  const std::size_t nl = g.left_size();
  Matching m(nl, g.right_size());
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(nl), queue, stack;
  std::vector<std::size_t> cursor(nl);
  queue.reserve(nl);

  auto bfs = [&] {
    queue.clear();
    for (std::size_t l = 0; l < nl; ++l) {
      if (m.left_mate(static_cast<int>(l)) == kUnmatched) {
        dist[l] = 0;
        queue.push_back(static_cast<int>(l));
      } else {
        dist[l] = kInf;
      }
    }
    bool found = false;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int u = queue[head];
      for (int r : g.neighbours(u)) {
        const int w = m.right_mate(r);
        if (w == kUnmatched) {
          found = true;
        } else if (dist[static_cast<std::size_t>(w)] == kInf) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          queue.push_back(w);
        }
      }
    }
    return found;
  };

  // Iterative layered DFS; the stack holds left vertices and cursor[u] the
  // neighbour currently being tried from u.
  auto augment = [&](int root) {
    stack.clear();
    stack.push_back(root);
    while (!stack.empty()) {
      const int u = stack.back();
      const auto ui = static_cast<std::size_t>(u);
      auto nb = g.neighbours(u);
      if (cursor[ui] == nb.size()) {
        dist[ui] = kInf;
        stack.pop_back();
        if (!stack.empty()) ++cursor[static_cast<std::size_t>(stack.back())];
        continue;
      }
      const int r = nb[cursor[ui]];
      const int w = m.right_mate(r);
      if (w == kUnmatched) {
        for (int x : stack) m.match(x, g.neighbours(x)[cursor[static_cast<std::size_t>(x)]]);
        return true;
      }
      if (dist[static_cast<std::size_t>(w)] != kInf && dist[static_cast<std::size_t>(w)] == dist[ui] + 1)
        stack.push_back(w);
      else
        ++cursor[ui];
    }
    return false;
  };

  while (bfs()) {
    std::fill(cursor.begin(), cursor.end(), 0);
    bool progress = false;
    for (std::size_t l = 0; l < nl; ++l)
      if (m.left_mate(static_cast<int>(l)) == kUnmatched && dist[l] == 0)
        progress = augment(static_cast<int>(l)) || progress;
    if (!progress) break;
  }
  return m;
}

/// True if some augmenting path starts at an unmatched left vertex.
inline bool has_augmenting_path(const BipartiteGraph& g, const Matching& m) {
  std::vector<char> seen_left(g.left_size(), 0);
  std::vector<int> queue = m.unmatched_left();
  for (int l : queue) seen_left[static_cast<std::size_t>(l)] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int r : g.neighbours(queue[head])) {
      const int w = m.right_mate(r);
      if (w == kUnmatched) return true;
      if (!seen_left[static_cast<std::size_t>(w)]) {
        seen_left[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  return false;
}

struct VertexCover {
  std::vector<int> left;
  std::vector<int> right;
  std::size_t size() const { return left.size() + right.size(); }
};

/// König's construction from a maximum matching: with Z the set reached by
/// alternating paths from unmatched left vertices, the cover is
/// (L \ Z) together with (R within Z).
inline VertexCover minimum_vertex_cover(const BipartiteGraph& g, const Matching& m) {
  std::vector<char> zl(g.left_size(), 0), zr(g.right_size(), 0);
  std::vector<int> queue = m.unmatched_left();
  for (int l : queue) zl[static_cast<std::size_t>(l)] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int r : g.neighbours(queue[head])) {
      if (zr[static_cast<std::size_t>(r)]) continue;
      zr[static_cast<std::size_t>(r)] = 1;
      const int w = m.right_mate(r);
      if (w != kUnmatched && !zl[static_cast<std::size_t>(w)]) {
        zl[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
  }
  VertexCover c;
  for (std::size_t l = 0; l < zl.size(); ++l)
    if (!zl[l]) c.left.push_back(static_cast<int>(l));
  for (std::size_t r = 0; r < zr.size(); ++r)
    if (zr[r]) c.right.push_back(static_cast<int>(r));
  return c;
}

/// A set S of right vertices with |N(S)| < |S|, witnessing that no matching
/// saturates the right side.
struct HallViolator {
  std::vector<int> right;
  std::vector<int> left_neighbours;
};

/// Alternating search from the first unmatched right vertex of a maximum
/// matching; empty optional when the matching saturates the right side.
inline std::optional<HallViolator> hall_violator_right(const BipartiteGraph& g, const Matching& m) {
  const auto free_right = m.unmatched_right();
  if (free_right.empty()) return std::nullopt;
  const auto rev = g.reverse_adjacency();
  std::vector<char> sr(g.right_size(), 0), sl(g.left_size(), 0);
  std::vector<int> queue{free_right.front()};
  sr[static_cast<std::size_t>(queue[0])] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int l : rev[static_cast<std::size_t>(queue[head])]) {
      if (sl[static_cast<std::size_t>(l)]) continue;
      sl[static_cast<std::size_t>(l)] = 1;
      const int r = m.left_mate(l);
      if (r != kUnmatched && !sr[static_cast<std::size_t>(r)]) {
        sr[static_cast<std::size_t>(r)] = 1;
        queue.push_back(r);
      }
    }
  }
  HallViolator h;
  for (std::size_t r = 0; r < sr.size(); ++r)
    if (sr[r]) h.right.push_back(static_cast<int>(r));
  for (std::size_t l = 0; l < sl.size(); ++l)
    if (sl[l]) h.left_neighbours.push_back(static_cast<int>(l));
  return h;
}

// ---------------------------------------------------------------------------
// Network-derived bipartite graphs
// ---------------------------------------------------------------------------

/// Left: tree vertices with a reticulation child. Right: reticulations.
/// Edge {t, r} for every network edge (t, r).
inline BipartiteGraph build_zn(const PhyloNetwork& net) {
  std::vector<VertexId> tree_side, retics;
  std::vector<int> right_index(net.vertex_count(), -1);
  for (VertexId v = 0; v < static_cast<VertexId>(net.vertex_count()); ++v) {
    if (net.is_reticulation(v)) {
      right_index[static_cast<std::size_t>(v)] = static_cast<int>(retics.size());
      retics.push_back(v);
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (VertexId v = 0; v < static_cast<VertexId>(net.vertex_count()); ++v) {
    if (!net.is_tree_vertex(v)) continue;
    bool parent_of_retic = false;
    for (VertexId c : net.children(v)) {
      if (!net.is_reticulation(c)) continue;
      if (!parent_of_retic) tree_side.push_back(v);
      parent_of_retic = true;
      edges.emplace_back(static_cast<int>(tree_side.size() - 1), right_index[static_cast<std::size_t>(c)]);
    }
  }
  return BipartiteGraph(std::move(tree_side), std::move(retics), std::move(edges));
}

/// Two copies of V; left u joined to right v for every network edge (u, v).
/// Left and right index i both stand for vertex i.
inline BipartiteGraph build_gn(const PhyloNetwork& net) {
  std::vector<VertexId> ids(net.vertex_count());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<VertexId>(i);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(net.edge_count());
  for (const Edge& e : net.edges()) edges.emplace_back(e.tail, e.head);
  return BipartiteGraph(ids, ids, std::move(edges));
}

struct ZnMatching {
  bool saturating = false;
  BipartiteGraph graph;
  Matching matching;
};

/// Whether a maximum matching of Z_N covers every reticulation.
inline ZnMatching reticulation_saturating(const PhyloNetwork& net) {
  ZnMatching out;
  out.graph = build_zn(net);
  out.matching = max_matching(out.graph);
  out.saturating = out.matching.size() == out.graph.right_size();
  return out;
}

/// A maximal path r1 t1 r2 ... t(k-1) rk of Z_N with both ends reticulations.
struct RrPath {
  std::vector<VertexId> reticulations;  // r1 .. rk
  std::vector<VertexId> tree_vertices;  // t1 .. t(k-1)

  std::size_t k() const { return reticulations.size(); }

  std::vector<VertexId> alternating() const {
    std::vector<VertexId> out;
    for (std::size_t i = 0; i < reticulations.size(); ++i) {
      out.push_back(reticulations[i]);
      if (i < tree_vertices.size()) out.push_back(tree_vertices[i]);
    }
    return out;
  }
};

/// Every vertex of Z_N has degree at most two (a reticulation has two
/// parents, a tree vertex two children), so Z_N is a disjoint union of paths
/// and cycles. Walks each path component from a reticulation end of degree
/// at most one and returns the first whose other end is also a reticulation,
/// scanning start vertices by ascending id. Does not consult a matching.
inline std::optional<RrPath> find_rr_path(const PhyloNetwork& net) {
  auto tree_parents = [&](VertexId r) {
    std::vector<VertexId> out;
    for (VertexId p : net.parents(r))
      if (net.is_tree_vertex(p)) out.push_back(p);
    return out;
  };
  auto retic_children = [&](VertexId t) {
    std::vector<VertexId> out;
    for (VertexId c : net.children(t))
      if (net.is_reticulation(c)) out.push_back(c);
    return out;
  };

  for (VertexId r = 0; r < static_cast<VertexId>(net.vertex_count()); ++r) {
    if (!net.is_reticulation(r)) continue;
    if (tree_parents(r).size() > 1) continue;
    RrPath path;
    path.reticulations.push_back(r);
    VertexId prev_tree = kNoVertex;
    VertexId current = r;
    bool ended_on_retic = true;
    for (;;) {
      VertexId next_tree = kNoVertex;
      for (VertexId t : tree_parents(current))
        if (t != prev_tree) next_tree = t;
      if (next_tree == kNoVertex) break;
      VertexId next_retic = kNoVertex;
      for (VertexId c : retic_children(next_tree))
        if (c != current) next_retic = c;
      if (next_retic == kNoVertex) {
        ended_on_retic = false;
        break;
      }
      path.tree_vertices.push_back(next_tree);
      path.reticulations.push_back(next_retic);
      prev_tree = next_tree;
      current = next_retic;
    }
    if (ended_on_retic) return path;
  }
  return std::nullopt;
}

}  // namespace tbnet
