#pragma once

// Brute-force oracles. Each one follows a definition directly by exhaustive
// enumeration and uses nothing from the library beyond the network data
// model (and leaf attachment for the attachment oracle). Size bounds keep
// the enumeration finite; exceeding one throws SizeLimitError.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tbnet/antichain.hpp"
#include "tbnet/network.hpp"

namespace tbnet::testkit {

namespace detail {

inline void require(bool ok, const char* what, std::size_t value, std::size_t bound) {
  if (!ok)
    throw SizeLimitError(std::string(what) + " oracle: size " + std::to_string(value) +
                         " exceeds bound " + std::to_string(bound));
}

/// descendants[v] has bit w set iff w is reachable from v (v included).
inline std::vector<std::uint64_t> descendant_masks(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  require(n <= 64, "reachability", n, 64);
  std::vector<std::uint64_t> mask(n, 0);
  std::function<std::uint64_t(VertexId)> visit = [&](VertexId v) -> std::uint64_t {
    auto& m = mask[static_cast<std::size_t>(v)];
    if (m) return m;
    std::uint64_t out = std::uint64_t{1} << v;
    for (VertexId c : net.children(v)) out |= visit(c);
    return m = out;
  };
  for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) visit(v);
  return mask;
}

/// Visits every rooted spanning tree: each non-root vertex keeps exactly one
/// incoming edge. `visit` receives the chosen parent of every vertex.
inline void for_each_spanning_tree(const PhyloNetwork& net,
                                   const std::function<void(const std::vector<VertexId>&)>& visit) {
  const std::size_t n = net.vertex_count();
  std::vector<VertexId> retics;
  std::vector<VertexId> parent(n, kNoVertex);
  for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
    auto ps = net.parents(v);
    if (ps.size() == 1) parent[static_cast<std::size_t>(v)] = ps[0];
    if (ps.size() == 2) retics.push_back(v);
  }
  const std::uint64_t combos = std::uint64_t{1} << retics.size();
  for (std::uint64_t mask = 0; mask < combos; ++mask) {
    for (std::size_t i = 0; i < retics.size(); ++i)
      parent[static_cast<std::size_t>(retics[i])] = net.parents(retics[i])[(mask >> i) & 1U];
    visit(parent);
  }
}

inline std::size_t leaves_outside_x(const PhyloNetwork& net, const std::vector<VertexId>& parent) {
  std::vector<char> has_child(net.vertex_count(), 0);
  for (VertexId p : parent)
    if (p != kNoVertex) has_child[static_cast<std::size_t>(p)] = 1;
  std::size_t count = 0;
  for (VertexId v = 0; v < static_cast<VertexId>(net.vertex_count()); ++v)
    if (!has_child[static_cast<std::size_t>(v)] && !net.is_leaf(v)) ++count;
  return count;
}

inline bool tree_based_unbounded(const PhyloNetwork& net) {
  bool found = false;
  for_each_spanning_tree(net, [&](const std::vector<VertexId>& parent) {
    if (!found && leaves_outside_x(net, parent) == 0) found = true;
  });
  return found;
}

/// Searches for vertex-disjoint paths, one starting at each `starts[i]`
/// (i >= index), each ending at a leaf, avoiding `used`.
inline bool link_to_leaves(const PhyloNetwork& net, const std::vector<VertexId>& starts, std::size_t index,
                           std::vector<char>& used) {
  if (index == starts.size()) return true;
  const VertexId s = starts[index];
  if (used[static_cast<std::size_t>(s)]) return false;
  std::vector<VertexId> path;
  std::function<bool(VertexId)> walk = [&](VertexId v) {
    used[static_cast<std::size_t>(v)] = 1;
    path.push_back(v);
    bool ok = false;
    if (net.is_leaf(v)) {
      ok = link_to_leaves(net, starts, index + 1, used);
    } else {
      for (VertexId c : net.children(v)) {
        if (used[static_cast<std::size_t>(c)]) continue;
        if (walk(c)) {
          ok = true;
          break;
        }
      }
    }
    path.pop_back();
    used[static_cast<std::size_t>(v)] = 0;
    return ok;
  };
  return walk(s);
}

}  // namespace detail

/// Definition: some rooted spanning tree has all its leaves in X.
inline bool oracle_tree_based(const PhyloNetwork& net) {
  detail::require(net.vertex_count() <= 20, "tree-based", net.vertex_count(), 20);
  return detail::tree_based_unbounded(net);
}

/// l(N): fewest leaves outside X over all rooted spanning trees.
inline std::size_t oracle_min_spanning_tree_extra_leaves(const PhyloNetwork& net) {
  detail::require(net.vertex_count() <= 20, "spanning-tree", net.vertex_count(), 20);
  std::size_t best = std::numeric_limits<std::size_t>::max();
  detail::for_each_spanning_tree(net, [&](const std::vector<VertexId>& parent) {
    best = std::min(best, detail::leaves_outside_x(net, parent));
  });
  return best;
}

/// d(N): fewest vertex-disjoint directed paths partitioning V. Enumerates
/// every choice of "next vertex on my path" (a child or nothing) such that
/// no vertex is chosen twice.
inline std::size_t oracle_min_path_partition(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  detail::require(n <= 16, "path-partition", n, 16);
  std::vector<char> has_pred(n, 0);
  std::size_t best_links = 0;
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t v, std::size_t links) {
    if (links + (n - v) <= best_links) return;
    if (v == n) {
      best_links = std::max(best_links, links);
      return;
    }
    for (VertexId c : net.children(static_cast<VertexId>(v))) {
      auto& taken = has_pred[static_cast<std::size_t>(c)];
      if (taken) continue;
      taken = 1;
      choose(v + 1, links + 1);
      taken = 0;
    }
    choose(v + 1, links);
  };
  choose(0, 0);
  return n - best_links;
}

/// t(N): fewest leaf attachments making the network tree-based. Tries every
/// multiset of edges of increasing size; several leaves on one edge are
/// attached one below the other. Terminates by size 2r at the latest.
inline std::size_t oracle_min_attachments(const PhyloNetwork& net) {
  detail::require(net.vertex_count() <= 20, "attachment", net.vertex_count(), 20);
  detail::require(net.reticulation_count() <= 3, "attachment (reticulations)", net.reticulation_count(), 3);
  const std::vector<Edge> edges(net.edges().begin(), net.edges().end());
  for (std::size_t j = 0;; ++j) {
    std::vector<std::size_t> pick(j, 0);
    for (;;) {
      std::vector<Edge> targets;
      std::vector<std::string> labels;
      VertexId next_id = static_cast<VertexId>(net.vertex_count());
      for (std::size_t i = 0; i < j; ++i) {
        Edge e = edges[pick[i]];
        // Repeated edge: attach below the previous subdivision vertex.
        if (i > 0 && pick[i] == pick[i - 1]) e = {next_id - 2, e.head};
        targets.push_back(e);
        labels.push_back("oracle_leaf_" + std::to_string(i));
        next_id += 2;
      }
      if (detail::tree_based_unbounded(attach_leaves(net, targets, labels))) return j;
      // Next non-decreasing index tuple.
      std::size_t k = j;
      while (k > 0 && pick[k - 1] + 1 == edges.size()) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t i = k; i < j; ++i) pick[i] = pick[k - 1];
    }
    if (j > 2 * net.reticulation_count() + 1) throw std::logic_error("attachment oracle did not terminate");
  }
}

/// Largest set of pairwise unreachable vertices, over all vertex subsets.
inline std::size_t oracle_max_antichain(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  detail::require(n <= 20, "antichain", n, 20);
  const auto desc = detail::descendant_masks(net);
  std::size_t best = 0;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    const auto size = static_cast<std::size_t>(std::popcount(s));
    if (size <= best) continue;
    bool anti = true;
    for (std::uint64_t bits = s; bits && anti; bits &= bits - 1) {
      const int v = std::countr_zero(bits);
      if (desc[static_cast<std::size_t>(v)] & s & ~(std::uint64_t{1} << v)) anti = false;
    }
    if (anti) best = size;
  }
  return best;
}

/// Backtracking search for pairwise vertex-disjoint paths from every member
/// of `starts` to leaves.
inline bool oracle_disjoint_paths_to_leaves(const PhyloNetwork& net, std::vector<VertexId> starts) {
  detail::require(net.vertex_count() <= 24, "disjoint-paths", net.vertex_count(), 24);
  std::vector<char> used(net.vertex_count(), 0);
  return detail::link_to_leaves(net, starts, 0, used);
}

/// Every antichain (not only maximal ones) links to the leaves.
inline bool oracle_antichain_to_leaf_property(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  detail::require(n <= 16, "antichain-to-leaf", n, 16);
  const auto desc = detail::descendant_masks(net);
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << n); ++s) {
    std::vector<VertexId> members;
    bool anti = true;
    for (std::uint64_t bits = s; bits && anti; bits &= bits - 1) {
      const int v = std::countr_zero(bits);
      if (desc[static_cast<std::size_t>(v)] & s & ~(std::uint64_t{1} << v)) anti = false;
      members.push_back(v);
    }
    if (anti && !oracle_disjoint_paths_to_leaves(net, members)) return false;
  }
  return true;
}

/// Least-fixpoint search for integer ranks: start every rank at 0 and raise
/// ranks until tree edges strictly increase and reticulation edges are
/// level. A solution exists iff no rank ever has to exceed |V|.
inline bool oracle_temporal(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  detail::require(n <= 64, "temporal", n, 64);
  std::vector<std::size_t> rank(n, 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (const Edge& e : net.edges()) {
      auto& a = rank[static_cast<std::size_t>(e.tail)];
      auto& b = rank[static_cast<std::size_t>(e.head)];
      if (net.is_reticulation(e.head)) {
        if (a != b) {
          a = b = std::max(a, b);
          changed = true;
        }
      } else if (b <= a) {
        b = a + 1;
        changed = true;
      }
      if (a > n || b > n) return false;
    }
  }
  return true;
}

/// Path-cover characterisation by exhaustion: for every U, some set of disjoint
/// paths ending in X covers each element of U exactly once. Returns the
/// first U (as a bitmask) for which no such system exists.
inline std::optional<std::uint64_t> oracle_path_cover_violation(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  detail::require(n <= 12, "path-cover", n, 12);
  const auto topo = net.topological_order();
  std::vector<char> used(n, 0);

  // Any valid system can be trimmed so each path starts at an element of U;
  // the topologically first uncovered element must then start its own path.
  std::function<bool(std::uint64_t)> cover = [&](std::uint64_t remaining) -> bool {
    if (!remaining) return true;
    VertexId first = kNoVertex;
    for (VertexId v : topo)
      if ((remaining >> v) & 1U) {
        first = v;
        break;
      }
    if (used[static_cast<std::size_t>(first)]) return false;
    std::function<bool(VertexId, std::uint64_t)> walk = [&](VertexId v, std::uint64_t left) -> bool {
      used[static_cast<std::size_t>(v)] = 1;
      left &= ~(std::uint64_t{1} << v);
      bool ok = false;
      if (net.is_leaf(v)) {
        ok = cover(left);
      } else {
        for (VertexId c : net.children(v))
          if (!used[static_cast<std::size_t>(c)] && walk(c, left)) {
            ok = true;
            break;
          }
      }
      used[static_cast<std::size_t>(v)] = 0;
      return ok;
    };
    return walk(first, remaining);
  };

  for (std::uint64_t u = 0; u < (std::uint64_t{1} << n); ++u)
    if (!cover(u)) return u;
  return std::nullopt;
}

/// Checks a claimed (U1, U2) pair against the two traversal conditions by
/// path search. A path "traverses" a set when any of its vertices, the
/// first included, lies in the set; this only matters when U1 and U2
/// overlap.
///  (i)  no path from U1 reaches a leaf while avoiding U2;
///  (ii) no path from Ui reaches Ui again while avoiding Uj.
inline bool oracle_traversal_conditions(const PhyloNetwork& net, const std::vector<VertexId>& u1,
                                        const std::vector<VertexId>& u2) {
  const std::size_t n = net.vertex_count();
  auto member = [n](const std::vector<VertexId>& s) {
    std::vector<char> m(n, 0);
    for (VertexId v : s) m[static_cast<std::size_t>(v)] = 1;
    return m;
  };
  const auto in1 = member(u1), in2 = member(u2);
  // Vertices reachable from `start` by paths of length >= 1 whose vertices
  // after the start all avoid `blocked`.
  auto reach_avoiding = [&](VertexId start, const std::vector<char>& blocked) {
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack;
    for (VertexId c : net.children(start)) stack.push_back(c);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(v)] || blocked[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      for (VertexId c : net.children(v)) stack.push_back(c);
    }
    return seen;
  };
  for (VertexId u : u1) {
    if (in2[static_cast<std::size_t>(u)]) continue;
    const auto seen = reach_avoiding(u, in2);
    for (VertexId x : net.leaves())
      if (seen[static_cast<std::size_t>(x)]) return false;
  }
  auto closed = [&](const std::vector<VertexId>& from, const std::vector<char>& same, const std::vector<char>& other) {
    for (VertexId u : from) {
      if (other[static_cast<std::size_t>(u)]) continue;
      const auto seen = reach_avoiding(u, other);
      for (std::size_t v = 0; v < n; ++v)
        if (seen[v] && same[v]) return false;
    }
    return true;
  };
  return closed(u1, in1, in2) && closed(u2, in2, in1);
}

}  // namespace tbnet::testkit
