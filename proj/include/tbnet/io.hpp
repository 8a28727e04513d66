#pragma once

// Extended Newick and edge-list readers/writers, plus DOT export with
// certificate overlays.

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tbnet/network.hpp"

namespace tbnet {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::string_view text, std::size_t offset, std::string message, std::string expected = {})
      : std::runtime_error(format(text, offset, message, expected)),
        offset_(std::min(offset, text.size())),
        message_(std::move(message)),
        expected_(std::move(expected)) {
    for (std::size_t i = 0; i < offset_; ++i) {
      if (text[i] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
  }

  std::size_t offset() const { return offset_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }
  const std::string& expected() const { return expected_; }

 private:
  static std::string format(std::string_view text, std::size_t offset, const std::string& message,
                            const std::string& expected) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(offset, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string s = std::to_string(line) + ":" + std::to_string(col) + ": " + message;
    if (!expected.empty()) s += " (expected " + expected + ")";
    return s;
  }

  std::size_t offset_;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::string message_;
  std::string expected_;
};

// ---------------------------------------------------------------------------
// Extended Newick
// ---------------------------------------------------------------------------

namespace detail {

inline bool is_newick_special(char c) {
  switch (c) {
    case '(': case ')': case '[': case ']': case '\'': case ',': case ':': case ';': case '#':
    case ' ': case '\t': case '\n': case '\r':
      return true;
    default:
      return false;
  }
}

class NewickReader {
 public:
  explicit NewickReader(std::string_view text) : text_(text) {}

  RawGraph read() {
    struct Node {
      std::string name;
      std::string hybrid;
      std::size_t offset = 0;
      int parent = -1;
    };
    std::vector<Node> nodes;
    std::vector<int> open;
    int root = -1;

    auto new_node = [&](std::size_t at) {
      const int id = static_cast<int>(nodes.size());
      nodes.push_back({});
      nodes.back().offset = at;
      nodes.back().parent = open.empty() ? -1 : open.back();
      if (root < 0) root = id;
      return id;
    };

    skip_blank();
    if (at_end()) fail("empty input", "a tree");
    for (;;) {
      // Expecting the start of a subtree.
      skip_blank();
      if (peek() == '(') {
        new_node(pos_);
        open.push_back(static_cast<int>(nodes.size()) - 1);
        ++pos_;
        continue;
      }
      {
        const std::size_t start = pos_;
        const int id = new_node(start);
        read_name(nodes[static_cast<std::size_t>(id)].name, nodes[static_cast<std::size_t>(id)].hybrid);
      }
      // After a complete subtree.
      for (;;) {
        skip_blank();
        if (at_end()) {
          if (!open.empty()) fail("unbalanced parenthesis", "')'");
          fail("missing terminating semicolon", "';'");
        }
        const char c = peek();
        if (c == ':') fail("branch lengths are not supported");
        if (c == ',') {
          if (open.empty()) fail("',' outside of parentheses", "';'");
          ++pos_;
          break;
        }
        if (c == ')') {
          if (open.empty()) fail("unbalanced parenthesis", "';'");
          const int id = open.back();
          open.pop_back();
          ++pos_;
          read_name(nodes[static_cast<std::size_t>(id)].name, nodes[static_cast<std::size_t>(id)].hybrid);
          continue;
        }
        if (c == ';') {
          if (!open.empty()) fail("unbalanced parenthesis", "')'");
          ++pos_;
          skip_blank();
          if (!at_end()) fail("unexpected text after ';'", "end of input");
          return build(nodes, root);
        }
        fail(std::string("unexpected character '") + c + "'", "',', ')' or ';'");
      }
    }
  }

 private:
  template <class Nodes>
  RawGraph build(const Nodes& nodes, int root) {
    (void)root;
    RawGraph g;
    std::vector<VertexId> vertex_of(nodes.size(), kNoVertex);
    std::unordered_map<std::string, VertexId> hybrid_vertex;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto& node = nodes[i];
      if (!node.hybrid.empty()) {
        auto it = hybrid_vertex.find(node.hybrid);
        if (it != hybrid_vertex.end()) {
          vertex_of[i] = it->second;
          auto& existing = g.names[static_cast<std::size_t>(it->second)];
          if (!node.name.empty()) {
            if (!existing.empty() && existing != node.name)
              throw ParseError(text_, node.offset,
                               "conflicting names '" + existing + "' and '" + node.name +
                                   "' for hybrid #" + node.hybrid);
            existing = node.name;
          }
          continue;
        }
        vertex_of[i] = g.add_vertex(node.name);
        hybrid_vertex.emplace(node.hybrid, vertex_of[i]);
      } else {
        vertex_of[i] = g.add_vertex(node.name);
      }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].parent >= 0)
        g.edges.push_back({vertex_of[static_cast<std::size_t>(nodes[i].parent)], vertex_of[i]});
    }
    return g;
  }

  void read_name(std::string& name, std::string& hybrid) {
    skip_blank();
    if (peek() == '\'') {
      const std::size_t start = pos_;
      ++pos_;
      for (;;) {
        if (at_end()) {
          pos_ = start;
          fail("unterminated quoted label", "closing quote");
        }
        const char c = text_[pos_++];
        if (c == '\'') {
          if (peek() == '\'') {
            name.push_back('\'');
            ++pos_;
            continue;
          }
          break;
        }
        name.push_back(c);
      }
    } else {
      while (!at_end() && !is_newick_special(peek())) name.push_back(text_[pos_++]);
    }
    if (peek() == '#') {
      ++pos_;
      std::string kind;
      while (!at_end() && std::isalpha(static_cast<unsigned char>(peek()))) kind.push_back(text_[pos_++]);
      std::string number;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) number.push_back(text_[pos_++]);
      if (number.empty()) fail("hybrid tag without a number", "digits after '#" + kind + "'");
      hybrid = kind + number;
    }
  }

  void skip_blank() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
      if (peek() != '[') return;
      const std::size_t start = pos_;
      const auto close = text_.find(']', pos_);
      if (close == std::string_view::npos) {
        pos_ = start;
        fail("unterminated comment", "']'");
      }
      pos_ = close + 1;
    }
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(std::string message, std::string expected = {}) const {
    throw ParseError(text_, pos_, std::move(message), std::move(expected));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string quote_label(const std::string& label) {
  const bool plain = !label.empty() && std::none_of(label.begin(), label.end(), is_newick_special);
  if (plain) return label;
  std::string out = "'";
  for (char c : label) {
    out.push_back(c);
    if (c == '\'') out.push_back('\'');
  }
  out.push_back('\'');
  return out;
}

}  // namespace detail

/// Parses one extended-Newick statement. Hybrid tags (`#H1`, `#LGT2`, ...)
/// with the same tag denote the same vertex. Throws ParseError on syntax
/// errors and ValidationError when the result is not a network.
inline PhyloNetwork parse_enewick(std::string_view text) {
  return PhyloNetwork::from_raw(detail::NewickReader(text).read());
}

/// Children are written in order of the smallest leaf label below them (ties
/// by vertex id). A reticulation's subtree is written at its first
/// occurrence; hybrid numbers follow order of first appearance.
inline std::string serialize_enewick(const PhyloNetwork& net) {
  const std::size_t n = net.vertex_count();
  if (n == 1) return detail::quote_label(net.name(0)) + ";";

  std::vector<VertexId> by_label(net.leaves().begin(), net.leaves().end());
  std::sort(by_label.begin(), by_label.end(),
            [&](VertexId a, VertexId b) { return net.name(a) < net.name(b); });
  std::vector<std::size_t> min_rank(n, n);
  for (std::size_t i = 0; i < by_label.size(); ++i) min_rank[static_cast<std::size_t>(by_label[i])] = i;
  const auto topo = net.topological_order();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    for (VertexId c : net.children(*it))
      min_rank[static_cast<std::size_t>(*it)] =
          std::min(min_rank[static_cast<std::size_t>(*it)], min_rank[static_cast<std::size_t>(c)]);
  }
  auto ordered_children = [&](VertexId v) {
    std::array<VertexId, 2> ch{kNoVertex, kNoVertex};
    auto span = net.children(v);
    std::copy(span.begin(), span.end(), ch.begin());
    if (span.size() == 2) {
      auto key = [&](VertexId c) { return std::pair(min_rank[static_cast<std::size_t>(c)], c); };
      if (key(ch[1]) < key(ch[0])) std::swap(ch[0], ch[1]);
    }
    return std::pair(ch, span.size());
  };

  std::vector<int> hybrid_number(n, 0);
  int next_hybrid = 0;
  std::string out;
  struct Frame {
    VertexId v;
    std::size_t next;
  };
  std::vector<Frame> stack;

  auto suffix = [&](VertexId v) {
    std::string s;
    if (!net.name(v).empty()) s += detail::quote_label(net.name(v));
    if (net.is_reticulation(v)) s += "#H" + std::to_string(hybrid_number[static_cast<std::size_t>(v)]);
    return s;
  };
  // Emits the opening of v; returns true if v's children must be written.
  auto open = [&](VertexId v) {
    const auto i = static_cast<std::size_t>(v);
    if (net.is_reticulation(v)) {
      if (hybrid_number[i] != 0) {
        out += "#H" + std::to_string(hybrid_number[i]);
        return false;
      }
      hybrid_number[i] = ++next_hybrid;
    }
    if (net.is_leaf(v)) {
      out += suffix(v);
      return false;
    }
    out.push_back('(');
    return true;
  };

  if (open(net.root())) stack.push_back({net.root(), 0});
  while (!stack.empty()) {
    Frame& f = stack.back();
    auto [ch, count] = ordered_children(f.v);
    if (f.next == count) {
      out.push_back(')');
      out += suffix(f.v);
      stack.pop_back();
      continue;
    }
    if (f.next > 0) out.push_back(',');
    const VertexId c = ch[f.next++];
    if (open(c)) stack.push_back({c, 0});
  }
  out.push_back(';');
  return out;
}

// ---------------------------------------------------------------------------
// Edge list
// ---------------------------------------------------------------------------

/// One "parent child" pair per line; a line with a single token declares an
/// isolated vertex (only meaningful for the single-vertex network). Lines
/// starting with '#' are comments.
inline PhyloNetwork parse_edgelist(std::string_view text) {
  RawGraph g;
  std::unordered_map<std::string, VertexId> ids;
  auto vertex = [&](const std::string& token) {
    auto [it, fresh] = ids.emplace(token, static_cast<VertexId>(g.vertex_count()));
    if (fresh) g.add_vertex(token);
    return it->second;
  };

  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);

    std::vector<std::pair<std::string, std::size_t>> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      if (tokens.empty() && line[i] == '#') break;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      tokens.emplace_back(std::string(line.substr(start, i - start)), line_start + start);
    }
    if (tokens.size() == 1) {
      vertex(tokens[0].first);
    } else if (tokens.size() == 2) {
      const VertexId t = vertex(tokens[0].first);
      const VertexId h = vertex(tokens[1].first);
      g.edges.push_back({t, h});
    } else if (tokens.size() > 2) {
      throw ParseError(text, tokens[2].second, "too many tokens on line", "'parent child'");
    }
    if (line_end == text.size()) break;
    line_start = line_end + 1;
  }
  if (g.vertex_count() == 0) throw ParseError(text, text.size(), "no edges found", "'parent child'");
  return PhyloNetwork::from_raw(std::move(g));
}

/// Printable, unique vertex names: the vertex's own name, or "_<id>" (with
/// extra underscores if that collides with a real name).
inline std::vector<std::string> display_names(const PhyloNetwork& net) {
  std::unordered_set<std::string> taken(net.names().begin(), net.names().end());
  std::vector<std::string> out(net.names().begin(), net.names().end());
  for (std::size_t v = 0; v < out.size(); ++v) {
    if (!out[v].empty()) continue;
    std::string candidate = "_" + std::to_string(v);
    while (taken.count(candidate)) candidate.insert(candidate.begin(), '_');
    taken.insert(candidate);
    out[v] = std::move(candidate);
  }
  return out;
}

inline std::string serialize_edgelist(const PhyloNetwork& net) {
  const auto names = display_names(net);
  std::string out;
  if (net.edge_count() == 0) return names[0] + "\n";
  for (const Edge& e : net.edges()) {
    out += names[static_cast<std::size_t>(e.tail)];
    out.push_back(' ');
    out += names[static_cast<std::size_t>(e.head)];
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

/// Elements to highlight when drawing a network.
struct DotOverlay {
  std::vector<Edge> base_tree;                 // drawn bold; other edges dashed
  std::vector<std::vector<VertexId>> paths;    // one colour per path
  std::vector<Edge> attached;                  // edges to newly attached leaves
  std::vector<VertexId> marked;                // e.g. an antichain or U1
  std::vector<VertexId> marked_secondary;      // e.g. U2
};

namespace dot_style {
inline constexpr std::string_view kGraphAttrs = "node [shape=circle, fontsize=10, width=0.3];";
inline constexpr std::string_view kLeafShape = "shape=box";
inline constexpr std::string_view kBaseTreeEdge = "style=bold";
inline constexpr std::string_view kNonBaseTreeEdge = "style=dashed, color=gray50";
inline constexpr std::string_view kAttachedEdge = "style=dashed, color=red";
inline constexpr std::string_view kMarked = "style=filled, fillcolor=gold";
inline constexpr std::string_view kMarkedSecondary = "style=filled, fillcolor=lightblue";
inline constexpr std::array<std::string_view, 8> kPathPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf"};
}  // namespace dot_style

/// Throws std::invalid_argument if the overlay names a vertex or edge that is
/// not in `net`.
inline std::string export_dot(const PhyloNetwork& net, const DotOverlay* overlay = nullptr) {
  const std::size_t n = net.vertex_count();
  auto check_vertex = [&](VertexId v) {
    if (v < 0 || static_cast<std::size_t>(v) >= n)
      throw std::invalid_argument("overlay references unknown vertex " + std::to_string(v));
  };
  auto check_edge = [&](Edge e) {
    if (!net.has_edge(e))
      throw std::invalid_argument("overlay references unknown edge (" + std::to_string(e.tail) +
                                  ", " + std::to_string(e.head) + ")");
  };

  std::map<Edge, std::string> edge_attrs;
  std::vector<std::string> vertex_attrs(n);
  if (overlay) {
    for (VertexId v : overlay->marked) check_vertex(v);
    for (VertexId v : overlay->marked_secondary) check_vertex(v);
    for (const auto& p : overlay->paths)
      for (VertexId v : p) check_vertex(v);
    for (const auto& p : overlay->paths)
      for (std::size_t i = 1; i < p.size(); ++i) check_edge({p[i - 1], p[i]});
    for (Edge e : overlay->base_tree) check_edge(e);
    for (Edge e : overlay->attached) check_edge(e);

    if (!overlay->base_tree.empty()) {
      for (Edge e : net.edges()) edge_attrs[e] = std::string(dot_style::kNonBaseTreeEdge);
      for (Edge e : overlay->base_tree) edge_attrs[e] = std::string(dot_style::kBaseTreeEdge);
    }
    for (std::size_t i = 0; i < overlay->paths.size(); ++i) {
      const auto colour = dot_style::kPathPalette[i % dot_style::kPathPalette.size()];
      const auto& p = overlay->paths[i];
      for (VertexId v : p)
        vertex_attrs[static_cast<std::size_t>(v)] = "color=\"" + std::string(colour) + "\", penwidth=2";
      for (std::size_t j = 1; j < p.size(); ++j)
        edge_attrs[{p[j - 1], p[j]}] = "color=\"" + std::string(colour) + "\", penwidth=2";
    }
    for (Edge e : overlay->attached) edge_attrs[e] = std::string(dot_style::kAttachedEdge);
    for (VertexId v : overlay->marked) vertex_attrs[static_cast<std::size_t>(v)] = std::string(dot_style::kMarked);
    for (VertexId v : overlay->marked_secondary)
      vertex_attrs[static_cast<std::size_t>(v)] = std::string(dot_style::kMarkedSecondary);
  }

  auto escape = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    return out;
  };

  std::ostringstream out;
  out << "digraph N {\n  " << dot_style::kGraphAttrs << "\n";
  for (std::size_t v = 0; v < n; ++v) {
    const auto id = static_cast<VertexId>(v);
    out << "  v" << v << " [label=\"" << escape(net.name(id)) << "\"";
    if (net.is_leaf(id)) out << ", " << dot_style::kLeafShape;
    if (!vertex_attrs[v].empty()) out << ", " << vertex_attrs[v];
    out << "];\n";
  }
  for (const Edge& e : net.edges()) {
    out << "  v" << e.tail << " -> v" << e.head;
    if (auto it = edge_attrs.find(e); it != edge_attrs.end()) out << " [" << it->second << "]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string export_dot(const PhyloNetwork& net, const DotOverlay& overlay) {
  return export_dot(net, &overlay);
}

}  // namespace tbnet
