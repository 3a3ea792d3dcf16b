#include <sstream>

#include "doctest.h"
#include "ptss/error.hpp"
#include "ptss/tree.hpp"
#include "support.hpp"

using namespace ptss;

namespace {
const char* kT1 = "->(a,b,+(*(<-(X(c,tau),d),e),f),g)";

std::vector<VertexId> ids(std::span<const VertexId> s) { return {s.begin(), s.end()}; }
}  // namespace

TEST_CASE("running example parses with breadth-first indices") {
  const ProcessTree t = parse_tree(kT1);
  // 13 vertices: ->, a, b, +, g, *, f, <-, e, X, d, c, tau
  CHECK(t.size() == 13);
  CHECK(t.label(0).is_operator(Operator::Sequence));
  CHECK(t.label(1).name() == "a");
  CHECK(t.label(3).is_operator(Operator::Parallel));
  CHECK(t.label(4).name() == "g");
  CHECK(t.label(5).is_operator(Operator::Loop));
  CHECK(t.label(7).is_operator(Operator::ReverseSequence));
  CHECK(t.label(9).is_operator(Operator::Choice));
  CHECK(t.label(12).is_tau());
  CHECK(validate(t).empty());
  CHECK(format_tree(t) == kT1);
  CHECK(t.activity_count() == 7);
  CHECK(t.alphabet() == std::vector<std::string>{"a", "b", "c", "d", "e", "f", "g"});
}

TEST_CASE("sibling queries") {
  const ProcessTree t = parse_tree(kT1);
  // v2 is the second child of the root
  CHECK(ids(t.lsib(2)) == std::vector<VertexId>{1});
  CHECK(ids(t.rsib(2)) == std::vector<VertexId>{3, 4});
  CHECK(t.sib(2) == std::vector<VertexId>{1, 3, 4});
  CHECK(t.sib(0).empty());
  CHECK(!t.parent(0));
  CHECK(t.parent(11) == VertexId{9});
  CHECK(t.position(4) == 3);
  std::vector<VertexId> all;
  for (VertexId v = 1; v < t.size(); ++v) all.push_back(v);
  CHECK(ids(t.desc(0)) == all);
  CHECK(ids(t.desc(7)) == std::vector<VertexId>{9, 10, 11, 12});
  CHECK(t.desc(1).empty());
}

TEST_CASE("subtree re-roots") {
  const ProcessTree t = parse_tree(kT1);
  CHECK(format_tree(t.subtree(5)) == "*(<-(X(c,tau),d),e)");
  CHECK(format_tree(t.subtree(12)) == "tau");
}

TEST_CASE("inversion swaps only sequence labels") {
  const ProcessTree t = parse_tree(kT1);
  const ProcessTree inv = invert(t);
  CHECK(format_tree(inv) == "<-(a,b,+(*(->(X(c,tau),d),e),f),g)");
  CHECK(invert(inv) == t);
  const ProcessTree flat = parse_tree("+(X(a,b),*(c,tau))");
  CHECK(invert(flat) == flat);
}

TEST_CASE("small trees") {
  const ProcessTree a = parse_tree("a");
  CHECK(a.size() == 1);
  CHECK(a.label(0).name() == "a");
  CHECK(format_tree(parse_tree("tau")) == "tau");
  CHECK(format_tree(parse_tree("  -> ( a ,\tb ) ")) == "->(a,b)");
  CHECK(format_tree(parse_tree("X(X,Xa)")) == "X(X,Xa)");
}

TEST_CASE("parse errors carry kind and position") {
  auto kind_of = [](const char* text) {
    try {
      parse_tree(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("no error for " << text);
    return ParseError::Kind::Syntax;
  };
  CHECK(kind_of("*(a,b,c)") == ParseError::Kind::Arity);
  CHECK(kind_of("*(a)") == ParseError::Kind::Arity);
  CHECK(kind_of("->(a,b") == ParseError::Kind::Syntax);
  CHECK(kind_of("->()") == ParseError::Kind::Syntax);
  CHECK(kind_of("") == ParseError::Kind::Syntax);
  CHECK(kind_of("a b") == ParseError::Kind::Syntax);
  CHECK(kind_of("tau(a)") == ParseError::Kind::ReservedToken);
  try {
    parse_tree("->(a,,b)");
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("validate reports broken arrays") {
  // operator without children
  auto lone = ProcessTree::from_arrays({NodeLabel::of(Operator::Choice)}, {kNoVertex});
  CHECK(validate(lone).size() == 1);
  // leaf label on an inner vertex
  auto inner_leaf = ProcessTree::from_arrays(
      {NodeLabel::activity("a"), NodeLabel::activity("b")}, {kNoVertex, 0});
  CHECK(!validate(inner_leaf).empty());
  // loop with one child
  auto loop = ProcessTree::from_arrays({NodeLabel::of(Operator::Loop), NodeLabel::activity("a")},
                                       {kNoVertex, 0});
  CHECK(!validate(loop).empty());
  CHECK_THROWS_AS(NodeLabel::activity("tau"), InvalidTree);
  CHECK_THROWS_AS(NodeLabel::activity("1a"), InvalidTree);
}

TEST_CASE("read_trees skips comments and names the line") {
  std::istringstream in("# header\n\n->(a,b)\n  # indented\nX(a,tau)\n");
  auto trees = read_trees(in);
  REQUIRE(trees.size() == 2);
  CHECK(format_tree(trees[1]) == "X(a,tau)");
  std::istringstream bad("a\n->(a\n");
  try {
    read_trees(bad);
    FAIL("accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("round trip, involution and index order on generated trees") {
  for (const ProcessTree& t : support::small_trees(7, 1000, 1, 15)) {
    const std::string text = format_tree(t);
    REQUIRE(parse_tree(text) == t);
    CHECK(invert(invert(t)) == t);
    const ProcessTree inv = invert(t);
    REQUIRE(inv.size() == t.size());
    for (VertexId v = 0; v < t.size(); ++v) {
      CHECK(inv.parent_or_none(v) == t.parent_or_none(v));
      if (v > 0) CHECK(t.parent_or_none(v) < v);
      auto c = t.children(v);
      CHECK(std::is_sorted(c.begin(), c.end()));
    }
  }
}
