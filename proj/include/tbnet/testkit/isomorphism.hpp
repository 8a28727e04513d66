#pragma once

// Label-preserving isomorphism of networks: leaves must map to leaves with
// the same label; internal vertex names are ignored.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "tbnet/network.hpp"

namespace tbnet::testkit {

namespace detail {

/// Per-vertex (in-degree, out-degree, set of leaf labels below) as a
/// comparable key. Leaf labels are ranked by a shared label order.
inline std::vector<std::vector<std::uint64_t>> leaf_signatures(const PhyloNetwork& net,
                                                               const std::map<std::string, std::size_t>& rank) {
  const std::size_t n = net.vertex_count();
  const std::size_t words = (rank.size() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> below(n, std::vector<std::uint64_t>(words, 0));
  auto order = net.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const VertexId v = *it;
    auto& mine = below[static_cast<std::size_t>(v)];
    if (net.is_leaf(v)) {
      const std::size_t r = rank.at(net.name(v));
      mine[r / 64] |= std::uint64_t{1} << (r % 64);
    }
    for (VertexId c : net.children(v))
      for (std::size_t w = 0; w < words; ++w) mine[w] |= below[static_cast<std::size_t>(c)][w];
  }
  for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
    auto& sig = below[static_cast<std::size_t>(v)];
    sig.push_back(net.in_degree(v));
    sig.push_back(net.out_degree(v));
  }
  return below;
}

}  // namespace detail

inline bool isomorphic(const PhyloNetwork& a, const PhyloNetwork& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() ||
      a.leaf_count() != b.leaf_count() || a.reticulation_count() != b.reticulation_count())
    return false;

  std::map<std::string, std::size_t> rank;
  for (VertexId v : a.leaves()) rank.emplace(a.name(v), rank.size());
  for (VertexId v : b.leaves())
    if (!rank.contains(b.name(v))) return false;

  const auto sig_a = detail::leaf_signatures(a, rank);
  const auto sig_b = detail::leaf_signatures(b, rank);

  const std::size_t n = a.vertex_count();
  std::map<std::vector<std::uint64_t>, std::vector<VertexId>> by_sig;
  for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) by_sig[sig_b[static_cast<std::size_t>(v)]].push_back(v);

  const auto order = a.topological_order();
  std::vector<VertexId> image(n, kNoVertex);
  std::vector<char> taken(n, 0);

  // Vertices are placed in topological order of `a`, so every parent of the
  // current vertex already has an image; a candidate must have exactly the
  // images of those parents as its parents.
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == order.size()) return true;
    const VertexId v = order[i];
    auto it = by_sig.find(sig_a[static_cast<std::size_t>(v)]);
    if (it == by_sig.end()) return false;
    std::vector<VertexId> want;
    for (VertexId p : a.parents(v)) want.push_back(image[static_cast<std::size_t>(p)]);
    std::sort(want.begin(), want.end());
    for (VertexId w : it->second) {
      if (taken[static_cast<std::size_t>(w)]) continue;
      if (a.is_leaf(v) && a.name(v) != b.name(w)) continue;
      std::vector<VertexId> have(b.parents(w).begin(), b.parents(w).end());
      std::sort(have.begin(), have.end());
      if (have != want) continue;
      image[static_cast<std::size_t>(v)] = w;
      taken[static_cast<std::size_t>(w)] = 1;
      if (place(i + 1)) return true;
      taken[static_cast<std::size_t>(w)] = 0;
      image[static_cast<std::size_t>(v)] = kNoVertex;
    }
    return false;
  };
  return place(0);
}

}  // namespace tbnet::testkit
