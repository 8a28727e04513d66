#pragma once

// Rooted binary phylogenetic networks: data model, validation and the two
// structural edits (edge subdivision, leaf attachment).

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace tbnet {

using VertexId = std::int32_t;

inline constexpr VertexId kNoVertex = -1;

struct Edge {
  VertexId tail = kNoVertex;
  VertexId head = kNoVertex;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class VertexKind { Root, Leaf, TreeVertex, Reticulation };
enum class EdgeKind { TreeEdge, ReticulationEdge };

inline std::string_view to_string(VertexKind k) {
  switch (k) {
    case VertexKind::Root: return "root";
    case VertexKind::Leaf: return "leaf";
    case VertexKind::TreeVertex: return "tree";
    case VertexKind::Reticulation: return "reticulation";
  }
  return "?";
}

/// A candidate graph that has not been checked against the network rules.
/// Names are optional for internal vertices; a leaf's name is its label.
struct RawGraph {
  std::vector<std::string> names;
  std::vector<Edge> edges;

  std::size_t vertex_count() const { return names.size(); }

  VertexId add_vertex(std::string name = {}) {
    names.push_back(std::move(name));
    return static_cast<VertexId>(names.size() - 1);
  }
};

struct Violation {
  std::string rule;
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool has(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
  }

  std::string summary() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
      if (i) out << "; ";
      out << violations[i].rule << ": " << violations[i].message;
    }
    return out.str();
  }
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report)
      : std::runtime_error("invalid phylogenetic network: " + report.summary()),
        report_(std::move(report)) {}

  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

namespace detail {

inline std::string vertex_ref(const RawGraph& g, VertexId v) {
  const auto& n = g.names[static_cast<std::size_t>(v)];
  return n.empty() ? "#" + std::to_string(v) : "'" + n + "'";
}

}  // namespace detail

/// Checks every clause of the network definition and reports all failures.
inline ValidationReport validate(const RawGraph& raw) {
  ValidationReport report;
  auto add = [&](std::string rule, std::vector<VertexId> vs, std::vector<Edge> es,
                 std::string msg) {
    report.violations.push_back({std::move(rule), std::move(vs), std::move(es), std::move(msg)});
  };

  const auto n = static_cast<VertexId>(raw.vertex_count());
  if (n == 0) {
    add("empty", {}, {}, "graph has no vertices");
    return report;
  }

  std::unordered_map<std::string_view, VertexId> seen_names;
  for (VertexId v = 0; v < n; ++v) {
    const auto& name = raw.names[static_cast<std::size_t>(v)];
    if (name.empty()) continue;
    auto [it, fresh] = seen_names.emplace(name, v);
    if (!fresh) add("duplicate-name", {it->second, v}, {}, "name '" + name + "' used twice");
  }

  std::vector<Edge> edges;
  edges.reserve(raw.edges.size());
  for (const Edge& e : raw.edges) {
    if (e.tail < 0 || e.tail >= n || e.head < 0 || e.head >= n) {
      add("edge-endpoint", {}, {e}, "edge references a vertex that does not exist");
      continue;
    }
    if (e.tail == e.head) {
      add("self-loop", {e.tail}, {e}, "self-loop at " + detail::vertex_ref(raw, e.tail));
      continue;
    }
    edges.push_back(e);
  }
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i] == edges[i - 1] && (i < 2 || edges[i - 2] != edges[i])) {
      add("parallel-edges", {edges[i].tail, edges[i].head}, {edges[i]},
          "parallel edges from " + detail::vertex_ref(raw, edges[i].tail) + " to " +
              detail::vertex_ref(raw, edges[i].head));
    }
  }

  std::vector<int> indeg(static_cast<std::size_t>(n), 0), outdeg(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges) {
    ++outdeg[static_cast<std::size_t>(e.tail)];
    ++indeg[static_cast<std::size_t>(e.head)];
  }

  std::vector<VertexId> sources;
  for (VertexId v = 0; v < n; ++v)
    if (indeg[static_cast<std::size_t>(v)] == 0) sources.push_back(v);
  if (sources.size() != 1) {
    add("root-count", sources, {},
        "expected exactly one vertex of in-degree 0, found " + std::to_string(sources.size()));
  }

  if (n == 1 && edges.empty()) {
    if (raw.names[0].empty()) add("leaf-label", {0}, {}, "the single vertex must carry a label");
    return report;
  }

  for (VertexId v = 0; v < n; ++v) {
    const auto i = static_cast<std::size_t>(v);
    const int in = indeg[i], out = outdeg[i];
    if (in == 0) {
      if (out != 2)
        add("root-degree", {v}, {},
            "root " + detail::vertex_ref(raw, v) + " has out-degree " + std::to_string(out));
    } else if (out == 0) {
      if (in != 1)
        add("leaf-degree", {v}, {},
            "leaf " + detail::vertex_ref(raw, v) + " has in-degree " + std::to_string(in));
      if (raw.names[i].empty())
        add("leaf-label", {v}, {}, "leaf " + detail::vertex_ref(raw, v) + " has no label");
    } else if (!((in == 1 && out == 2) || (in == 2 && out == 1))) {
      add("vertex-degree", {v}, {},
          "vertex " + detail::vertex_ref(raw, v) + " has (in, out) = (" + std::to_string(in) +
              ", " + std::to_string(out) + ")");
    }
  }

  // Kahn's algorithm; whatever is left over lies on or behind a cycle.
  std::vector<std::vector<VertexId>> out_adj(static_cast<std::size_t>(n));
  for (const Edge& e : edges) out_adj[static_cast<std::size_t>(e.tail)].push_back(e.head);
  std::vector<int> remaining = indeg;
  std::vector<VertexId> queue = sources;
  std::size_t processed = 0;
  while (processed < queue.size()) {
    VertexId v = queue[processed++];
    for (VertexId w : out_adj[static_cast<std::size_t>(v)])
      if (--remaining[static_cast<std::size_t>(w)] == 0) queue.push_back(w);
  }
  if (processed != static_cast<std::size_t>(n)) {
    std::vector<VertexId> stuck;
    for (VertexId v = 0; v < n; ++v)
      if (remaining[static_cast<std::size_t>(v)] > 0) stuck.push_back(v);
    add("cycle", stuck, {}, "graph contains a directed cycle");
  }
  return report;
}

/// A validated rooted binary phylogenetic network. Immutable once built;
/// vertex ids are dense in [0, vertex_count()).
class PhyloNetwork {
 public:
  /// Throws ValidationError when `raw` violates the network definition.
  static PhyloNetwork from_raw(RawGraph raw) {
    ValidationReport report = validate(raw);
    if (!report.ok()) throw ValidationError(std::move(report));
    return PhyloNetwork(std::move(raw));
  }

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  VertexId root() const { return root_; }

  std::span<const VertexId> children(VertexId v) const {
    const auto i = checked(v);
    return {children_[i].data(), outdeg_[i]};
  }
  std::span<const VertexId> parents(VertexId v) const {
    const auto i = checked(v);
    return {parents_[i].data(), indeg_[i]};
  }
  std::size_t in_degree(VertexId v) const { return indeg_[checked(v)]; }
  std::size_t out_degree(VertexId v) const { return outdeg_[checked(v)]; }

  bool is_leaf(VertexId v) const { return outdeg_[checked(v)] == 0; }
  bool is_reticulation(VertexId v) const { return indeg_[checked(v)] == 2; }
  bool is_tree_vertex(VertexId v) const { return !is_leaf(v) && !is_reticulation(v); }

  /// Leaves in ascending id order; their labels form X.
  std::span<const VertexId> leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t reticulation_count() const { return reticulation_count_; }

  const std::string& name(VertexId v) const { return names_[checked(v)]; }
  std::span<const std::string> names() const { return names_; }

  std::optional<VertexId> find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  bool has_edge(Edge e) const {
    if (e.tail < 0 || static_cast<std::size_t>(e.tail) >= vertex_count()) return false;
    auto ch = children(e.tail);
    return std::find(ch.begin(), ch.end(), e.head) != ch.end();
  }

  /// Parents before children; ties broken by ascending id.
  std::span<const VertexId> topological_order() const { return topo_; }

  RawGraph to_raw() const { return RawGraph{names_, edges_}; }

 private:
  explicit PhyloNetwork(RawGraph raw) : names_(std::move(raw.names)), edges_(std::move(raw.edges)) {
    const std::size_t n = names_.size();
    std::sort(edges_.begin(), edges_.end());
    children_.assign(n, {kNoVertex, kNoVertex});
    parents_.assign(n, {kNoVertex, kNoVertex});
    indeg_.assign(n, 0);
    outdeg_.assign(n, 0);
    for (const Edge& e : edges_) {
      const auto t = static_cast<std::size_t>(e.tail), h = static_cast<std::size_t>(e.head);
      children_[t][outdeg_[t]++] = e.head;
      parents_[h][indeg_[h]++] = e.tail;
    }
    for (std::size_t v = 0; v < n; ++v) {
      const auto id = static_cast<VertexId>(v);
      if (indeg_[v] == 0) root_ = id;
      if (outdeg_[v] == 0) leaves_.push_back(id);
      if (indeg_[v] == 2) ++reticulation_count_;
      if (indeg_[v] > 1 && parents_[v][0] > parents_[v][1]) std::swap(parents_[v][0], parents_[v][1]);
      if (!names_[v].empty()) by_name_.emplace(names_[v], id);
    }

    std::vector<std::size_t> remaining(indeg_.begin(), indeg_.end());
    topo_.reserve(n);
    topo_.push_back(root_);
    for (std::size_t i = 0; i < topo_.size(); ++i) {
      const auto v = static_cast<std::size_t>(topo_[i]);
      for (std::size_t c = 0; c < outdeg_[v]; ++c) {
        const VertexId w = children_[v][c];
        if (--remaining[static_cast<std::size_t>(w)] == 0) topo_.push_back(w);
      }
    }
  }

  std::size_t checked(VertexId v) const {
    if (v < 0 || static_cast<std::size_t>(v) >= names_.size())
      throw std::out_of_range("unknown vertex id " + std::to_string(v));
    return static_cast<std::size_t>(v);
  }

  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::array<VertexId, 2>> children_;
  std::vector<std::array<VertexId, 2>> parents_;
  std::vector<std::uint8_t> indeg_;
  std::vector<std::uint8_t> outdeg_;
  std::vector<VertexId> leaves_;
  std::vector<VertexId> topo_;
  std::unordered_map<std::string, VertexId> by_name_;
  std::size_t reticulation_count_ = 0;
  VertexId root_ = 0;
};

/// The single-vertex network is classified as a leaf: its vertex is the
/// whole of X.
inline VertexKind classify(const PhyloNetwork& net, VertexId v) {
  if (net.is_leaf(v)) return VertexKind::Leaf;
  if (net.in_degree(v) == 0) return VertexKind::Root;
  if (net.is_reticulation(v)) return VertexKind::Reticulation;
  return VertexKind::TreeVertex;
}

inline EdgeKind classify(const PhyloNetwork& net, Edge e) {
  if (!net.has_edge(e)) throw std::out_of_range("unknown edge");
  return net.is_reticulation(e.head) ? EdgeKind::ReticulationEdge : EdgeKind::TreeEdge;
}

/// Result of subdividing an edge. The graph is generally not a valid
/// network: the new vertex has in- and out-degree one.
struct Subdivision {
  RawGraph graph;
  VertexId new_vertex = kNoVertex;
};

inline Subdivision subdivide_edge(const RawGraph& g, Edge e) {
  auto it = std::find(g.edges.begin(), g.edges.end(), e);
  if (it == g.edges.end()) throw std::out_of_range("unknown edge");
  Subdivision out{g, kNoVertex};
  out.new_vertex = out.graph.add_vertex();
  out.graph.edges.erase(out.graph.edges.begin() + (it - g.edges.begin()));
  out.graph.edges.push_back({e.tail, out.new_vertex});
  out.graph.edges.push_back({out.new_vertex, e.head});
  return out;
}

inline Subdivision subdivide_edge(const PhyloNetwork& net, Edge e) {
  if (!net.has_edge(e)) throw std::out_of_range("unknown edge");
  return subdivide_edge(net.to_raw(), e);
}

/// Attaches one new leaf per edge, in order. Each edge must be an edge of
/// the network being extended at that step (so attaching twice to the same
/// original edge requires naming one of its subdivided halves). New vertices
/// take ids n, n+1, ... in pairs (subdivision vertex, leaf).
inline PhyloNetwork attach_leaves(const PhyloNetwork& net, std::span<const Edge> edges,
                                  std::span<const std::string> labels) {
  if (edges.size() != labels.size())
    throw std::invalid_argument("attach_leaves: one label per edge required");
  RawGraph g = net.to_raw();
  std::vector<Edge>& es = g.edges;
  // Edge lookup stays linear-time overall via a position index.
  std::unordered_map<std::uint64_t, std::size_t> position;
  auto key = [](Edge e) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.tail)) << 32) |
           static_cast<std::uint32_t>(e.head);
  };
  for (std::size_t i = 0; i < es.size(); ++i) position.emplace(key(es[i]), i);
  std::unordered_set<std::string> used;
  for (const auto& n : g.names)
    if (!n.empty()) used.insert(n);

  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge e = edges[i];
    const std::string& label = labels[i];
    if (label.empty()) throw std::invalid_argument("attached leaf needs a non-empty label");
    if (!used.insert(label).second)
      throw std::invalid_argument("label '" + label + "' already in use");
    auto it = position.find(key(e));
    if (it == position.end()) throw std::out_of_range("unknown edge");
    const std::size_t slot = it->second;
    position.erase(it);
    const VertexId u = g.add_vertex();
    const VertexId y = g.add_vertex(label);
    es[slot] = {e.tail, u};
    position.emplace(key(es[slot]), slot);
    es.push_back({u, e.head});
    position.emplace(key(es.back()), es.size() - 1);
    es.push_back({u, y});
    position.emplace(key(es.back()), es.size() - 1);
  }
  return PhyloNetwork::from_raw(std::move(g));
}

inline PhyloNetwork attach_leaf(const PhyloNetwork& net, Edge e, const std::string& label) {
  return attach_leaves(net, std::span<const Edge>(&e, 1), std::span<const std::string>(&label, 1));
}

}  // namespace tbnet
