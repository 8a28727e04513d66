#pragma once

// Tree-based decision with certificates, the deviation indices l = p = t,
// and the three constructions behind them: a minimum vertex-disjoint path
// partition, a rooted spanning tree with fewest non-X leaves, and a
// tree-based completion by leaf attachment.

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "tbnet/matching.hpp"
#include "tbnet/network.hpp"

namespace tbnet {

struct PathPartition {
  std::vector<std::vector<VertexId>> paths;

  std::size_t size() const { return paths.size(); }
};

/// Paths are non-empty, consecutive vertices are edges, and every vertex
/// lies on exactly one path.
inline bool is_path_partition(const PhyloNetwork& net, const PathPartition& pp) {
  std::vector<char> seen(net.vertex_count(), 0);
  std::size_t covered = 0;
  for (const auto& path : pp.paths) {
    if (path.empty()) return false;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const VertexId v = path[i];
      if (v < 0 || static_cast<std::size_t>(v) >= seen.size() || seen[static_cast<std::size_t>(v)]) return false;
      seen[static_cast<std::size_t>(v)] = 1;
      ++covered;
      if (i > 0 && !net.has_edge({path[i - 1], v})) return false;
    }
  }
  return covered == net.vertex_count();
}

struct SpanningTree {
  std::vector<Edge> edges;  // sorted
  VertexId root = kNoVertex;
  std::vector<VertexId> leaves;  // ascending

  std::vector<VertexId> leaves_outside(const PhyloNetwork& net) const {
    std::vector<VertexId> out;
    for (VertexId v : leaves)
      if (!net.is_leaf(v)) out.push_back(v);
    return out;
  }
};

/// Edges form a rooted tree on all of V, using only network edges.
inline bool is_rooted_spanning_tree(const PhyloNetwork& net, std::span<const Edge> edges) {
  const std::size_t n = net.vertex_count();
  if (edges.size() + 1 != n) return false;
  std::vector<int> indeg(n, 0);
  std::vector<std::vector<VertexId>> kids(n);
  for (const Edge& e : edges) {
    if (!net.has_edge(e)) return false;
    if (++indeg[static_cast<std::size_t>(e.head)] > 1) return false;
    kids[static_cast<std::size_t>(e.tail)].push_back(e.head);
  }
  if (indeg[static_cast<std::size_t>(net.root())] != 0) return false;
  std::vector<VertexId> stack{net.root()};
  std::size_t reached = 0;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    ++reached;
    for (VertexId c : kids[static_cast<std::size_t>(v)]) stack.push_back(c);
  }
  return reached == n;
}

struct DeviationReport {
  std::size_t l = 0;
  std::size_t p = 0;
  std::size_t t = 0;
  std::size_t u_gn = 0;
  std::size_t x_size = 0;
  std::size_t d = 0;
};

struct BaseTreeCertificate {
  SpanningTree tree;
};

/// U1 = {q, t1, ..., t(k-1), q'} and U2 = {r1, ..., rk}, where q and q' are
/// the parents of r1 and rk outside the path (both reticulations).
struct FailureCertificate {
  RrPath path;
  VertexId q = kNoVertex;
  VertexId q_prime = kNoVertex;
  std::vector<VertexId> u1;
  std::vector<VertexId> u2;
};

using TreeBasedCertificate = std::variant<BaseTreeCertificate, FailureCertificate>;

struct TreeBasedResult {
  bool tree_based = false;
  TreeBasedCertificate certificate;
};

/// One maximum matching of G_N together with the partition it induces.
struct GnAnalysis {
  BipartiteGraph graph;
  Matching matching;
  PathPartition partition;
};

/// Builds G_N, matches it, and follows matched edges from every unmatched
/// right vertex (a vertex with no predecessor on its path).
inline GnAnalysis analyse_gn(const PhyloNetwork& net) {
  GnAnalysis a;
  a.graph = build_gn(net);
  a.matching = max_matching(a.graph);
  for (int start : a.matching.unmatched_right()) {
    std::vector<VertexId> path{static_cast<VertexId>(start)};
    for (int v = start; a.matching.left_mate(v) != kUnmatched;) {
      v = a.matching.left_mate(v);
      path.push_back(static_cast<VertexId>(v));
    }
    a.partition.paths.push_back(std::move(path));
  }
  return a;
}

inline DeviationReport deviation_from(const PhyloNetwork& net, const GnAnalysis& a) {
  DeviationReport r;
  r.u_gn = a.graph.left_size() - a.matching.size();
  r.x_size = net.leaf_count();
  r.p = r.u_gn - r.x_size;
  r.l = r.p;
  r.t = r.p;
  r.d = r.u_gn;
  return r;
}

/// p(N) = u(G_N) - |X|; l and t equal p.
inline DeviationReport deviation_indices(const PhyloNetwork& net) {
  return deviation_from(net, analyse_gn(net));
}

/// Minimum partition of V into vertex-disjoint directed paths; one path per
/// unmatched right vertex of a maximum matching of G_N, ordered by start id.
inline PathPartition vertex_disjoint_paths(const PhyloNetwork& net) {
  return analyse_gn(net).partition;
}

/// Keeps the root's path and joins every other path to the rest by the
/// incoming edge of its first vertex whose tail has the smallest id.
inline SpanningTree spanning_tree_from(const PhyloNetwork& net, const PathPartition& pp) {
  SpanningTree tree;
  tree.root = net.root();
  for (const auto& path : pp.paths) {
    if (path.front() != net.root()) {
      auto ps = net.parents(path.front());
      tree.edges.push_back({*std::min_element(ps.begin(), ps.end()), path.front()});
    }
    for (std::size_t i = 1; i < path.size(); ++i) tree.edges.push_back({path[i - 1], path[i]});
  }
  std::sort(tree.edges.begin(), tree.edges.end());
  std::vector<char> has_child(net.vertex_count(), 0);
  for (const Edge& e : tree.edges) has_child[static_cast<std::size_t>(e.tail)] = 1;
  for (std::size_t v = 0; v < has_child.size(); ++v)
    if (!has_child[v]) tree.leaves.push_back(static_cast<VertexId>(v));
  return tree;
}

/// A rooted spanning tree whose number of leaves outside X is l(N).
inline SpanningTree rooted_spanning_tree(const PhyloNetwork& net) {
  return spanning_tree_from(net, vertex_disjoint_paths(net));
}

/// Decides tree-basedness by the size of a maximum matching of G_N
/// (|V| - |X| exactly when tree-based). A positive answer carries a base
/// tree; a negative one the maximal rr path of Z_N and the (U1, U2) pair.
inline TreeBasedResult is_tree_based(const PhyloNetwork& net) {
  const GnAnalysis a = analyse_gn(net);
  TreeBasedResult out;
  out.tree_based = a.matching.size() == net.vertex_count() - net.leaf_count();
  if (out.tree_based) {
    out.certificate = BaseTreeCertificate{spanning_tree_from(net, a.partition)};
    return out;
  }
  auto path = find_rr_path(net);
  if (!path) throw std::logic_error("G_N matching deficient but Z_N has no rr path");
  FailureCertificate f;
  f.path = std::move(*path);
  const auto& rs = f.path.reticulations;
  const auto& ts = f.path.tree_vertices;
  auto other_parent = [&](VertexId r, VertexId not_this) {
    for (VertexId p : net.parents(r))
      if (p != not_this) return p;
    return kNoVertex;
  };
  if (rs.size() == 1) {
    auto ps = net.parents(rs.front());
    f.q = ps[0];
    f.q_prime = ps[1];
  } else {
    f.q = other_parent(rs.front(), ts.front());
    f.q_prime = other_parent(rs.back(), ts.back());
  }
  f.u1.push_back(f.q);
  f.u1.insert(f.u1.end(), ts.begin(), ts.end());
  f.u1.push_back(f.q_prime);
  f.u2 = rs;
  out.certificate = std::move(f);
  return out;
}

/// Whether V splits into vertex-disjoint paths that each end at a leaf, i.e.
/// the minimum path partition has exactly |X| paths.
inline bool check_path_partition_characterisation(const PhyloNetwork& net) {
  const PathPartition pp = vertex_disjoint_paths(net);
  if (pp.size() != net.leaf_count()) return false;
  return std::all_of(pp.paths.begin(), pp.paths.end(),
                     [&](const auto& path) { return net.is_leaf(path.back()); });
}

struct Completion {
  PhyloNetwork network;
  std::vector<Edge> attached_to;     // edges of the input network, in order
  std::vector<VertexId> new_leaves;  // ids in the completed network
};

/// Attaches one new leaf below every non-X leaf of rooted_spanning_tree, on
/// the out-edge whose head has the smallest id. New labels are
/// attached_1, attached_2, ... skipping labels already in use.
inline Completion tree_based_completion(const PhyloNetwork& net) {
  const SpanningTree tree = rooted_spanning_tree(net);
  std::vector<Edge> targets;
  for (VertexId l : tree.leaves_outside(net)) {
    auto ch = net.children(l);
    targets.push_back({l, *std::min_element(ch.begin(), ch.end())});
  }
  std::unordered_set<std::string> used(net.names().begin(), net.names().end());
  std::vector<std::string> labels;
  for (std::size_t counter = 1; labels.size() < targets.size(); ++counter) {
    std::string label = "attached_" + std::to_string(counter);
    if (!used.count(label)) labels.push_back(std::move(label));
  }
  Completion out{attach_leaves(net, targets, labels), targets, {}};
  for (std::size_t i = 0; i < targets.size(); ++i)
    out.new_leaves.push_back(static_cast<VertexId>(net.vertex_count() + 2 * i + 1));
  return out;
}

}  // namespace tbnet
