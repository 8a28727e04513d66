#pragma once

// Antichains of the reachability order, maximum antichains with a matching
// chain partition, disjoint paths from an antichain to the leaves, the
// antichain-to-leaf property, and the violating antichain of a temporal
// network that is not tree-based.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbnet/flow.hpp"
#include "tbnet/matching.hpp"
#include "tbnet/network.hpp"
#include "tbnet/temporal.hpp"
#include "tbnet/treebased.hpp"

namespace tbnet {

class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct Antichain {
  std::vector<VertexId> vertices;  // ascending

  std::size_t size() const { return vertices.size(); }
  friend bool operator==(const Antichain&, const Antichain&) = default;
};

/// Reflexive reachability as one bitset row per vertex. Quadratic memory;
/// meant for desk-scale networks.
class Reachability {
 public:
  explicit Reachability(const PhyloNetwork& net)
      : n_(net.vertex_count()), words_((n_ + 63) / 64), bits_(n_ * words_, 0) {
    const auto topo = net.topological_order();
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
      const auto v = static_cast<std::size_t>(*it);
      row(v)[v / 64] |= std::uint64_t{1} << (v % 64);
      for (VertexId c : net.children(*it)) {
        const std::uint64_t* src = row(static_cast<std::size_t>(c));
        std::uint64_t* dst = row(v);
        for (std::size_t w = 0; w < words_; ++w) dst[w] |= src[w];
      }
    }
  }

  bool reaches(VertexId from, VertexId to) const {
    const auto t = static_cast<std::size_t>(to);
    return (row(static_cast<std::size_t>(from))[t / 64] >> (t % 64)) & 1U;
  }

  bool comparable(VertexId a, VertexId b) const { return reaches(a, b) || reaches(b, a); }

 private:
  std::uint64_t* row(std::size_t v) { return bits_.data() + v * words_; }
  const std::uint64_t* row(std::size_t v) const { return bits_.data() + v * words_; }

  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

namespace detail {

inline std::vector<VertexId> normalised_set(const PhyloNetwork& net, std::vector<VertexId> s) {
  for (VertexId v : s)
    if (v < 0 || static_cast<std::size_t>(v) >= net.vertex_count())
      throw std::out_of_range("unknown vertex id " + std::to_string(v));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace detail

/// No member reaches another. Linear-time search from each member.
inline bool is_antichain(const PhyloNetwork& net, std::vector<VertexId> s) {
  s = detail::normalised_set(net, std::move(s));
  std::vector<char> member(net.vertex_count(), 0);
  for (VertexId v : s) member[static_cast<std::size_t>(v)] = 1;
  std::vector<int> stamp(net.vertex_count(), -1);
  std::vector<VertexId> stack;
  for (std::size_t i = 0; i < s.size(); ++i) {
    stack.assign(net.children(s[i]).begin(), net.children(s[i]).end());
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      const auto vi = static_cast<std::size_t>(v);
      if (stamp[vi] == static_cast<int>(i)) continue;
      stamp[vi] = static_cast<int>(i);
      if (member[vi]) return false;
      for (VertexId c : net.children(v)) stack.push_back(c);
    }
  }
  return true;
}

struct MaxAntichain {
  Antichain antichain;
  std::vector<std::vector<VertexId>> chains;  // partition of V, one chain per member
};

/// Dilworth via Fulkerson: a maximum matching in the bipartite graph of the
/// strict reachability order gives a minimum chain cover (n - |M| chains),
/// and vertices with neither copy in the König cover form an antichain of
/// the same size.
inline MaxAntichain max_antichain(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  const Reachability reach(net);
  std::vector<VertexId> ids(n);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    ids[u] = static_cast<VertexId>(u);
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && reach.reaches(static_cast<VertexId>(u), static_cast<VertexId>(v)))
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  const BipartiteGraph g(ids, ids, std::move(edges));
  const Matching m = max_matching(g);
  const VertexCover cover = minimum_vertex_cover(g, m);

  std::vector<char> covered(n, 0);
  for (int l : cover.left) covered[static_cast<std::size_t>(l)] = 1;
  for (int r : cover.right) covered[static_cast<std::size_t>(r)] = 1;
  MaxAntichain out;
  for (std::size_t v = 0; v < n; ++v)
    if (!covered[v]) out.antichain.vertices.push_back(static_cast<VertexId>(v));
  for (int start : m.unmatched_right()) {
    std::vector<VertexId> chain{static_cast<VertexId>(start)};
    for (int v = start; m.left_mate(v) != kUnmatched;) {
      v = m.left_mate(v);
      chain.push_back(static_cast<VertexId>(v));
    }
    out.chains.push_back(std::move(chain));
  }
  return out;
}

struct DisjointPathWitness {
  std::vector<std::vector<VertexId>> paths;  // one per antichain member, in member order
};

struct LeafLinkage {
  bool linked = false;
  std::size_t flow = 0;
  std::optional<DisjointPathWitness> witness;
};

/// Whether the members of `a` can be joined to leaves by pairwise
/// vertex-disjoint directed paths. Unit vertex capacities via vertex
/// splitting; the witness is read off the integral flow.
inline LeafLinkage antichain_to_leaf(const PhyloNetwork& net, const Antichain& a) {
  const auto members = detail::normalised_set(net, a.vertices);
  if (!is_antichain(net, members)) throw std::invalid_argument("vertex set is not an antichain");
  const int n = static_cast<int>(net.vertex_count());
  const int source = 2 * n, sink = 2 * n + 1;
  auto in = [](VertexId v) { return 2 * v; };
  auto out = [](VertexId v) { return 2 * v + 1; };
  detail::FlowNetwork flow(2 * n + 2);
  for (VertexId v = 0; v < n; ++v) flow.add_arc(in(v), out(v), 1);
  for (const Edge& e : net.edges()) flow.add_arc(out(e.tail), in(e.head), 1);
  for (VertexId x : net.leaves()) flow.add_arc(out(x), sink, 1);
  for (VertexId v : members) flow.add_arc(source, in(v), 1);

  LeafLinkage result;
  result.flow = static_cast<std::size_t>(flow.max_flow(source, sink));
  result.linked = result.flow == members.size();
  if (!result.linked) return result;

  DisjointPathWitness w;
  for (VertexId start : members) {
    std::vector<VertexId> path{start};
    int node = out(start);
    for (;;) {
      int next = -1;
      for (const auto& arc : flow.adj(node))
        if (arc.original > 0 && arc.flow() > 0) next = arc.to;
      if (next == sink || next < 0) break;
      const VertexId v = next / 2;
      path.push_back(v);
      node = out(v);
    }
    w.paths.push_back(std::move(path));
  }
  result.witness = std::move(w);
  return result;
}

/// Edge-disjoint analogue of antichain_to_leaf (vertices uncapacitated).
inline bool antichain_to_leaf_edge_disjoint(const PhyloNetwork& net, const Antichain& a) {
  const auto members = detail::normalised_set(net, a.vertices);
  const int n = static_cast<int>(net.vertex_count());
  const int source = n, sink = n + 1;
  detail::FlowNetwork flow(n + 2);
  for (const Edge& e : net.edges()) flow.add_arc(e.tail, e.head, 1);
  for (VertexId x : net.leaves()) flow.add_arc(x, sink, n);
  for (VertexId v : members) flow.add_arc(source, v, 1);
  return static_cast<std::size_t>(flow.max_flow(source, sink)) == members.size();
}

/// Calls `visit` with every maximal antichain (Bron-Kerbosch with pivoting on
/// the incomparability graph) until it returns false. At most 64 vertices.
inline void for_each_maximal_antichain(const PhyloNetwork& net,
                                       const std::function<bool(const Antichain&)>& visit) {
  const std::size_t n = net.vertex_count();
  if (n > 64) throw SizeLimitError("maximal antichain enumeration supports at most 64 vertices");
  const Reachability reach(net);
  std::vector<std::uint64_t> incomparable(n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && !reach.comparable(static_cast<VertexId>(u), static_cast<VertexId>(v)))
        incomparable[u] |= std::uint64_t{1} << v;

  bool stop = false;
  std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> expand =
      [&](std::uint64_t chosen, std::uint64_t candidates, std::uint64_t excluded) {
        if (stop) return;
        if (candidates == 0 && excluded == 0) {
          Antichain a;
          for (std::uint64_t bits = chosen; bits; bits &= bits - 1)
            a.vertices.push_back(static_cast<VertexId>(std::countr_zero(bits)));
          if (!visit(a)) stop = true;
          return;
        }
        std::uint64_t pool = candidates | excluded;
        std::size_t pivot = static_cast<std::size_t>(std::countr_zero(pool));
        int best = -1;
        for (std::uint64_t bits = pool; bits; bits &= bits - 1) {
          const auto u = static_cast<std::size_t>(std::countr_zero(bits));
          const int score = std::popcount(candidates & incomparable[u]);
          if (score > best) {
            best = score;
            pivot = u;
          }
        }
        for (std::uint64_t bits = candidates & ~incomparable[pivot]; bits && !stop; bits &= bits - 1) {
          const auto v = static_cast<std::size_t>(std::countr_zero(bits));
          const std::uint64_t bit = std::uint64_t{1} << v;
          expand(chosen | bit, candidates & incomparable[v], excluded & incomparable[v]);
          candidates &= ~bit;
          excluded |= bit;
        }
      };
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  expand(0, all, 0);
}

enum class PropertyMode { Exhaustive, TemporalShortcut };

struct AntichainPropertyResult {
  bool holds = false;
  std::optional<Antichain> violating;
  std::size_t antichains_checked = 0;
};

inline Antichain temporal_violating_antichain(const PhyloNetwork& net);

/// Exhaustive mode tests every maximal antichain: a subset of a linked
/// antichain is linked by dropping paths, so maximal ones suffice. The
/// temporal shortcut answers with tree-basedness and requires a temporal
/// network.
inline AntichainPropertyResult has_antichain_to_leaf_property(const PhyloNetwork& net, PropertyMode mode,
                                                              std::size_t vertex_bound = 18) {
  AntichainPropertyResult result;
  if (mode == PropertyMode::TemporalShortcut) {
    if (!is_temporal(net).temporal) throw std::invalid_argument("network is not temporal");
    result.holds = is_tree_based(net).tree_based;
    if (!result.holds) result.violating = temporal_violating_antichain(net);
    return result;
  }
  if (net.vertex_count() > vertex_bound)
    throw SizeLimitError("exhaustive antichain check limited to " + std::to_string(vertex_bound) +
                         " vertices, network has " + std::to_string(net.vertex_count()));
  result.holds = true;
  for_each_maximal_antichain(net, [&](const Antichain& a) {
    ++result.antichains_checked;
    if (antichain_to_leaf(net, a).linked) return true;
    result.holds = false;
    result.violating = a;
    return false;
  });
  return result;
}

/// For a temporal, non-tree-based network: takes the maximal rr path
/// r1 t1 ... rk of Z_N and returns U = {q, t1, ..., t(k-1), q'} if it is an
/// antichain, otherwise U minus whichever of q, q' is reachable from some
/// r_i (reflexively: q or q' may itself lie on the path, and then both can
/// be reached from the same r_i). For k = 1 the two (reticulation) parents
/// of r1.
inline Antichain temporal_violating_antichain(const PhyloNetwork& net) {
  if (!is_temporal(net).temporal) throw std::invalid_argument("network is not temporal");
  const auto path = find_rr_path(net);
  if (!path) throw std::invalid_argument("network is tree-based");
  const auto& rs = path->reticulations;
  const auto& ts = path->tree_vertices;

  auto as_antichain = [&](std::vector<VertexId> vs) {
    std::sort(vs.begin(), vs.end());
    if (!is_antichain(net, vs)) throw std::logic_error("constructed set is not an antichain");
    Antichain a{std::move(vs)};
    if (antichain_to_leaf(net, a).linked) throw std::logic_error("constructed antichain links to the leaves");
    return a;
  };
  if (rs.size() == 1) {
    auto ps = net.parents(rs.front());
    return as_antichain({ps.begin(), ps.end()});
  }

  auto other_parent = [&](VertexId r, VertexId not_this) {
    for (VertexId p : net.parents(r))
      if (p != not_this) return p;
    return kNoVertex;
  };
  const VertexId q = other_parent(rs.front(), ts.front());
  const VertexId q_prime = other_parent(rs.back(), ts.back());
  std::vector<VertexId> u{q};
  u.insert(u.end(), ts.begin(), ts.end());
  u.push_back(q_prime);
  if (is_antichain(net, u)) return as_antichain(u);

  const Reachability reach(net);
  auto reaching = [&](VertexId target) {
    for (VertexId r : rs)
      if (reach.reaches(r, target)) return r;
    return kNoVertex;
  };
  const VertexId below_q = reaching(q);
  const VertexId below_q_prime = reaching(q_prime);
  if (below_q == kNoVertex && below_q_prime == kNoVertex)
    throw std::logic_error("U is not an antichain yet neither q nor q' lies below the rr path");
  std::vector<VertexId> reduced;
  for (VertexId v : u) {
    if (v == q && below_q != kNoVertex) continue;
    if (v == q_prime && below_q_prime != kNoVertex) continue;
    reduced.push_back(v);
  }
  return as_antichain(reduced);
}

}  // namespace tbnet
