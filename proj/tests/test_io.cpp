#include "support.hpp"
#include "tbnet/testkit/isomorphism.hpp"

using namespace tbnet;
using testkit::isomorphic;

TEST(Enewick, ParsesTree) {
  const auto net = parse_enewick("((a,b),c);");
  EXPECT_EQ(net.vertex_count(), 5u);
  EXPECT_EQ(net.leaf_count(), 3u);
  EXPECT_EQ(net.reticulation_count(), 0u);
}

TEST(Enewick, HybridMerging) {
  const auto net = parse_enewick("((a,(c)#H1),(#H1,b));");
  EXPECT_EQ(net.reticulation_count(), 1u);
  EXPECT_EQ(net.leaf_count(), 3u);
  const VertexId c = *net.find("c");
  EXPECT_TRUE(net.is_reticulation(net.parents(c)[0]));
}

TEST(Enewick, NamedHybridAndKindPrefix) {
  const auto a = parse_enewick("((a,(c)h#LGT1),(#LGT1,b))r;");
  ASSERT_TRUE(a.find("h"));
  EXPECT_TRUE(a.is_reticulation(*a.find("h")));
  EXPECT_EQ(a.name(a.root()), "r");
}

TEST(Enewick, QuotedLabelsAndComments) {
  const auto net = parse_enewick("(('a b','it''s')[note],c);");
  EXPECT_TRUE(net.find("a b"));
  EXPECT_TRUE(net.find("it's"));
  const auto back = parse_enewick(serialize_enewick(net));
  EXPECT_TRUE(isomorphic(net, back));
}

TEST(Enewick, SingleLeaf) {
  const auto net = parse_enewick("a;");
  EXPECT_EQ(net.vertex_count(), 1u);
  EXPECT_EQ(serialize_enewick(net), "a;");
}

struct BadInput {
  const char* text;
  const char* fragment;
};

class EnewickErrors : public ::testing::TestWithParam<BadInput> {};

TEST_P(EnewickErrors, ReportsLocation) {
  try {
    parse_enewick(GetParam().text);
    FAIL() << "accepted " << GetParam().text;
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(GetParam().fragment), std::string::npos) << e.what();
    EXPECT_GE(e.line(), 1u);
    EXPECT_GE(e.column(), 1u);
  }
}

INSTANTIATE_TEST_SUITE_P(Cases, EnewickErrors,
                         ::testing::Values(BadInput{"((a,b),c;", "unbalanced"}, BadInput{"((a,b),c)", "semicolon"},
                                           BadInput{"((a:1,b),c);", "branch lengths"},
                                           BadInput{"(a,b);x", "after ';'"}, BadInput{"((a,#H),b);", "number"},
                                           BadInput{"", "empty"}, BadInput{"  \n", "empty"}));

TEST(Enewick, ErrorLineAndColumn) {
  try {
    parse_enewick("(a,\n b:2);");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
}

TEST(Enewick, ValidationFailureIsNotAParseError) {
  // Syntactically fine, but the root has one child.
  EXPECT_THROW(parse_enewick("((a,b));"), ValidationError);
}

TEST(Enewick, RoundTripSeeded) {
  for (const auto& net : tbtest::sample(400, 8, 6)) {
    const std::string text = serialize_enewick(net);
    const auto back = parse_enewick(text);
    ASSERT_TRUE(isomorphic(net, back)) << text;
  }
}

TEST(Enewick, SerializationIgnoresVertexNumbering) {
  const auto a = parse_enewick("((a,(c)#H1),(#H1,b));");
  const auto b = parse_enewick("((b,(c)#H7),(#H7,a));");
  EXPECT_EQ(serialize_enewick(a), serialize_enewick(b));
}

TEST(Edgelist, ParsesWithCommentsAndIsolatedDeclaration) {
  const auto net = parse_edgelist("# comment\nr a\n\nr b\n");
  EXPECT_EQ(net.vertex_count(), 3u);
  EXPECT_EQ(parse_edgelist("solo\n").vertex_count(), 1u);
}

TEST(Edgelist, TooManyTokens) {
  try {
    parse_edgelist("r a\nr b c\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 5u);
  }
}

TEST(Edgelist, EmptyIsAnError) { EXPECT_THROW(parse_edgelist("# nothing\n"), ParseError); }

TEST(Edgelist, RoundTripSeeded) {
  for (const auto& net : tbtest::sample(400, 8, 6)) {
    const auto back = parse_edgelist(serialize_edgelist(net));
    ASSERT_TRUE(isomorphic(net, back));
  }
}

TEST(Edgelist, DisplayNamesAvoidCollisions) {
  const auto net = parse_edgelist("_2 a\n_2 b\n");  // root literally named "_2"
  const auto back = parse_edgelist(serialize_edgelist(net));
  EXPECT_TRUE(isomorphic(net, back));
}

TEST(Isomorphism, DistinguishesLeafPlacement) {
  EXPECT_TRUE(isomorphic(parse_enewick("((a,b),c);"), parse_enewick("(c,(b,a));")));
  EXPECT_FALSE(isomorphic(parse_enewick("((a,b),c);"), parse_enewick("((a,c),b);")));
  EXPECT_FALSE(isomorphic(parse_enewick("((a,(c)#H1),(#H1,b));"), parse_enewick("((a,(b)#H1),(#H1,c));")));
}

TEST(Dot, OneLeafPathsGetTwoColours) {
  const auto net = tbtest::fixture("one_leaf.edges");
  DotOverlay overlay;
  overlay.paths = vertex_disjoint_paths(net).paths;
  const std::string dot = export_dot(net, overlay);
  std::set<std::string> colours;
  for (auto c : dot_style::kPathPalette)
    if (dot.find(std::string(c)) != std::string::npos) colours.insert(std::string(c));
  EXPECT_EQ(colours.size(), 2u);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
}

TEST(Dot, EveryEdgeAppearsOnce) {
  const auto net = tbtest::fixture("tree_based.edges");
  const std::string dot = export_dot(net);
  for (const Edge& e : net.edges()) {
    const std::string arc = "v" + std::to_string(e.tail) + " -> v" + std::to_string(e.head);
    EXPECT_NE(dot.find(arc), std::string::npos) << arc;
  }
}

TEST(Dot, BaseTreeSolidRestDashed) {
  const auto net = tbtest::fixture("tree_based.edges");
  DotOverlay overlay;
  overlay.base_tree = rooted_spanning_tree(net).edges;
  const std::string dot = export_dot(net, overlay);
  std::size_t bold = 0, dashed = 0;
  for (std::size_t at = 0; (at = dot.find(dot_style::kBaseTreeEdge, at)) != std::string::npos; ++at) ++bold;
  for (std::size_t at = 0; (at = dot.find(dot_style::kNonBaseTreeEdge, at)) != std::string::npos; ++at) ++dashed;
  EXPECT_EQ(bold, net.vertex_count() - 1);
  EXPECT_EQ(dashed, net.edge_count() - (net.vertex_count() - 1));
}

TEST(Dot, DanglingOverlayIsRejected) {
  const auto net = tbtest::fixture("one_leaf.edges");
  DotOverlay overlay;
  overlay.marked = {42};
  EXPECT_THROW(export_dot(net, overlay), std::invalid_argument);
  overlay.marked.clear();
  overlay.base_tree = {{0, 6}};
  EXPECT_THROW(export_dot(net, overlay), std::invalid_argument);
}
