#pragma once

// Seeded random network generator.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the standard; bounded integers and reals are derived from raw engine
// output here (not through <random> distributions, whose algorithms are
// implementation-defined), so a seed reproduces the same network on every
// platform.
//
// Construction: every vertex carries a time in [0, 1], strictly increasing
// along edges (root 0, leaves 1). A binary tree is grown by attaching leaves
// to uniformly chosen edges; each reticulation then subdivides two distinct
// edges at times s < t and joins the earlier subdivision vertex to the later
// one, which keeps the graph acyclic.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tbnet/network.hpp"
#include "tbnet/temporal.hpp"

namespace tbnet::testkit {

struct GenSpec {
  std::size_t num_leaves = 2;
  std::size_t num_reticulations = 0;
  std::uint64_t seed = 0;
  bool temporal_only = false;
  std::size_t rejection_budget = 20000;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound), by rejection on the top of the 64-bit range.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x < limit) return x % bound;
    }
  }

  /// Uniform in [0, 1) with 53 bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double between(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

class NetworkBuilder {
 public:
  static constexpr double kMinGap = 1e-9;

  explicit NetworkBuilder(Rng& rng) : rng_(rng) {}

  VertexId vertex(double time, std::string name = {}) {
    times_.push_back(time);
    return raw_.add_vertex(std::move(name));
  }

  void edge(VertexId a, VertexId b) { raw_.edges.push_back({a, b}); }

  double time(VertexId v) const { return times_[static_cast<std::size_t>(v)]; }

  /// Splits edge slot i at `t`; returns the new vertex.
  VertexId split(std::size_t i, double t) {
    const Edge e = raw_.edges[i];
    const VertexId u = vertex(t);
    raw_.edges[i] = {e.tail, u};
    edge(u, e.head);
    return u;
  }

  std::size_t edge_count() const { return raw_.edges.size(); }
  Edge edge_at(std::size_t i) const { return raw_.edges[i]; }

  void grow_tree(std::size_t leaves) {
    const VertexId root = vertex(0.0);
    edge(root, vertex(1.0, leaf_label()));
    edge(root, vertex(1.0, leaf_label()));
    while (next_label_ <= leaves) {
      const std::size_t i = pick_edge();
      const Edge e = edge_at(i);
      const VertexId u = split(i, inner_time(time(e.tail), time(e.head)));
      edge(u, vertex(1.0, leaf_label()));
    }
  }

  /// The smallest networks on one leaf have three reticulations: two tree
  /// vertices below the root both feeding two reticulations, which merge
  /// into a third above the leaf.
  void one_leaf_base() {
    const VertexId root = vertex(0.0);
    const VertexId a = vertex(0.2);
    const VertexId b = vertex(0.2);
    const VertexId h1 = vertex(0.4);
    const VertexId h2 = vertex(0.4);
    const VertexId h3 = vertex(0.6);
    edge(root, a);
    edge(root, b);
    edge(a, h1);
    edge(a, h2);
    edge(b, h1);
    edge(b, h2);
    edge(h1, h3);
    edge(h2, h3);
    edge(h3, vertex(1.0, leaf_label()));
  }

  void add_reticulation() {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      std::size_t i = pick_edge(), j = pick_edge();
      if (i == j) continue;
      Edge from = edge_at(i), to = edge_at(j);
      // Subdivision times s on `from`, t on `to` with s < t.
      if (time(from.tail) >= time(to.head)) {
        std::swap(i, j);
        std::swap(from, to);
        if (time(from.tail) >= time(to.head)) continue;
      }
      const double s_hi = std::min(time(from.head), time(to.head));
      if (s_hi - time(from.tail) < 2 * kMinGap) continue;
      const double s = inner_time(time(from.tail), s_hi);
      const double t_lo = std::max(s, time(to.tail));
      if (time(to.head) - t_lo < 2 * kMinGap) continue;
      const double t = inner_time(t_lo, time(to.head));
      const VertexId su = split(i, s);
      const VertexId tu = split(j, t);
      edge(su, tu);
      return;
    }
    throw GenerationError("could not place a reticulation");
  }

  RawGraph take() { return std::move(raw_); }

 private:
  std::string leaf_label() { return "x" + std::to_string(next_label_++); }

  std::size_t pick_edge() {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      const std::size_t i = rng_.below(edge_count());
      const Edge e = edge_at(i);
      if (time(e.head) - time(e.tail) >= 2 * kMinGap) return i;
    }
    throw GenerationError("edge times collapsed");
  }

  double inner_time(double lo, double hi) {
    const double gap = hi - lo;
    return rng_.between(lo + 0.1 * gap, lo + 0.9 * gap);
  }

  Rng& rng_;
  RawGraph raw_;
  std::vector<double> times_;
  std::size_t next_label_ = 1;
};

inline PhyloNetwork generate_once(const GenSpec& spec, Rng& rng) {
  NetworkBuilder b(rng);
  std::size_t retics = spec.num_reticulations;
  if (spec.num_leaves == 1) {
    if (retics == 0) {
      b.vertex(0.0, "x1");
      return PhyloNetwork::from_raw(b.take());
    }
    if (retics < 3) throw GenerationError("a network on one leaf needs 0 or at least 3 reticulations");
    b.one_leaf_base();
    retics -= 3;
  } else {
    b.grow_tree(spec.num_leaves);
  }
  for (std::size_t i = 0; i < retics; ++i) b.add_reticulation();
  return PhyloNetwork::from_raw(b.take());
}

}  // namespace detail

/// Leaves are labelled x1, x2, ...; internal vertices are unnamed. With
/// temporal_only, draws are repeated from the same stream until one is
/// temporal or the rejection budget runs out.
inline PhyloNetwork generate(const GenSpec& spec) {
  if (spec.num_leaves == 0) throw std::invalid_argument("num_leaves must be at least 1");
  Rng rng(spec.seed);
  if (!spec.temporal_only) return detail::generate_once(spec, rng);
  for (std::size_t attempt = 0; attempt < spec.rejection_budget; ++attempt) {
    PhyloNetwork net = detail::generate_once(spec, rng);
    if (is_temporal(net).temporal) return net;
  }
  throw GenerationError("rejection budget exhausted while sampling a temporal network");
}

}  // namespace tbnet::testkit
