#include "doctest.h"
#include "oracle.hpp"
#include "ptss/error.hpp"
#include "ptss/language.hpp"
#include "ptss/search.hpp"
#include "support.hpp"

using namespace ptss;

namespace {

const char* kT1 = "->(a,b,+(*(<-(X(c,tau),d),e),f),g)";

void check_valid(const ProcessTree& t, const SearchOutcome& o) {
  CHECK(o.run.size() == o.run_length);
  CHECK(replay(t, initial_state(t), o.run) == final_state(t));
}

}  // namespace

TEST_CASE("strategy names") {
  CHECK(parse_strategy("BD") == Strategy::BD);
  CHECK(parse_strategy("bdp") == Strategy::BDP);
  CHECK(!parse_strategy("dfs"));
  CHECK(strategy_name(Strategy::UD) == "ud");
}

TEST_CASE("shortest runs of small trees") {
  // lengths from the Dijkstra oracle, counts frozen from the implementation
  struct Case {
    const char* tree;
    std::size_t length;
    std::size_t ud_expanded;
  };
  for (const Case& c : {Case{"->(a,b)", 6, 7}, Case{"X(a,tau)", 5, 8}, Case{"a", 2, 3},
                        Case{"->(a)", 4, 5}, Case{"*(a,b)", 5, 6}, Case{kT1, 24, 89}}) {
    CAPTURE(c.tree);
    const ProcessTree t = parse_tree(c.tree);
    CHECK(oracle::shortest_run(t) == static_cast<long>(c.length));
    for (Strategy s : {Strategy::UD, Strategy::BD, Strategy::BDP}) {
      const SearchOutcome o = search(t, s);
      CHECK(o.run_length == c.length);
      check_valid(t, o);
    }
    CHECK(search_ud(t).expanded_states == c.ud_expanded);
  }
}

TEST_CASE("ud run of a sequence") {
  const ProcessTree t = parse_tree("->(a,b)");
  CHECK(format_run(search_ud(t).run) ==
        "v0 F->O\nv1 F->O\nv1 O->C\nv2 F->O\nv2 O->C\nv0 O->C\n");
}

TEST_CASE("bd counts both directions") {
  const ProcessTree t = parse_tree(kT1);
  const SearchOutcome o = search_bd(t);
  CHECK(o.expanded_states == o.forward_expanded + o.backward_expanded);
  CHECK(o.expanded_states == 76);
  CHECK(o.expanded_states < search_ud(t).expanded_states);
  CHECK(search_ud(t).forward_expanded == search_ud(t).expanded_states);
}

TEST_CASE("combine_direct") {
  const ProcessTree t = parse_tree("->(a)");
  const Run fwd = parse_run("v0 F->O\nv1 F->O\n");
  const Run bwd = parse_run("v0 F->O\nv1 F->O\n");
  const Run run = combine_direct(t, fwd, bwd);
  CHECK(run.size() == 4);
  CHECK(replay(t, initial_state(t), run) == final_state(t));
  const Run full = search_ud(t).run;
  CHECK(combine_direct(t, full, {}) == full);
  CHECK_THROWS_AS(combine_direct(t, fwd, parse_run("v0 F->O\n")), Error);
  CHECK_THROWS_AS(combine_direct(t, parse_run("v1 F->O\n"), {}), IllegalTransition);
}

TEST_CASE("cap and deadline") {
  const ProcessTree t = parse_tree("+(a,b,c,d,e,f,g,h,i,j)");
  SearchOptions o;
  o.state_cap = 100;
  for (Strategy s : {Strategy::UD, Strategy::BD, Strategy::BDP})
    CHECK_THROWS_AS(search(t, s, o), CapExceeded);
  o.state_cap = 10'000'000;
  o.timeout = std::chrono::nanoseconds(1);
  for (Strategy s : {Strategy::UD, Strategy::BD, Strategy::BDP})
    CHECK_THROWS_AS(search(t, s, o), Timeout);
}

TEST_CASE("all strategies agree with the oracle on generated trees") {
  for (const ProcessTree& t : support::small_trees(31, 300, 2, 9)) {
    CAPTURE(format_tree(t));
    const long expected = oracle::shortest_run(t);
    REQUIRE(expected > 0);
    for (Strategy s : {Strategy::UD, Strategy::BD, Strategy::BDP}) {
      const SearchOutcome o = search(t, s);
      CHECK(static_cast<long>(o.run_length) == expected);
      check_valid(t, o);
    }
  }
}

TEST_CASE("runs project into the bounded language") {
  for (const ProcessTree& t : support::small_trees(32, 100, 1, 5)) {
    const Language l = enumerate_language(t, 2);
    CHECK(l.count(project_run(t, search_bd(t).run)) == 1);
  }
}

TEST_CASE("inverse tree has the same shortest run length") {
  for (const ProcessTree& t : support::small_trees(33, 200, 3, 12)) {
    CHECK(search_bd(invert(t)).run_length == search_bd(t).run_length);
  }
}

TEST_CASE("bd and ud are deterministic") {
  const ProcessTree t = parse_tree(kT1);
  CHECK(search_bd(t).run == search_bd(t).run);
  CHECK(search_ud(t).run == search_ud(t).run);
  CHECK(search_bdp(t).run_length == 24);
}
