#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptss/tree.hpp"

namespace ptss {

enum class VertexState : std::uint8_t { Future = 0, Open = 1, Closed = 2 };

char to_char(VertexState s) noexcept;
/// F <-> C, O fixed.
constexpr VertexState invert_vertex_state(VertexState s) noexcept {
  switch (s) {
    case VertexState::Future: return VertexState::Closed;
    case VertexState::Closed: return VertexState::Future;
    case VertexState::Open: return VertexState::Open;
  }
  return s;
}

/// Total assignment of a VertexState to every vertex, indexed by VertexId.
class TreeState {
 public:
  TreeState() = default;
  explicit TreeState(std::size_t n, VertexState fill = VertexState::Future)
      : states_(n, fill) {}
  explicit TreeState(std::vector<VertexState> states) : states_(std::move(states)) {}

  /// Parses the debug form, e.g. "OFFC". Throws Error on other characters.
  static TreeState from_string(std::string_view text);

  std::size_t size() const noexcept { return states_.size(); }
  VertexState operator[](VertexId v) const { return states_[v]; }
  VertexState& operator[](VertexId v) { return states_[v]; }
  std::span<const VertexState> values() const noexcept { return states_; }
  std::span<VertexState> values() noexcept { return states_; }

  bool uniform(VertexState s) const noexcept;
  std::string to_string() const;

  friend bool operator==(const TreeState&, const TreeState&) = default;
  friend auto operator<=>(const TreeState&, const TreeState&) = default;

 private:
  std::vector<VertexState> states_;
};

struct TreeStateHash {
  std::size_t operator()(const TreeState& s) const noexcept;
};

/// v[from -> to]. Only F->O, O->C, F->C and C->F are vertex-state moves.
struct Transition {
  VertexId vertex = 0;
  VertexState from = VertexState::Future;
  VertexState to = VertexState::Future;

  friend bool operator==(const Transition&, const Transition&) = default;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

bool is_vertex_move(VertexState from, VertexState to) noexcept;

using Run = std::vector<Transition>;

/// "v7 F->O"
std::string to_string(const Transition& t);
/// One transition per line, newline terminated.
std::string format_run(const Run& run);
Run parse_run(std::string_view text);

TreeState initial_state(const ProcessTree& tree);
TreeState final_state(const ProcessTree& tree);

/// Outcome of checking one transition; `clause` names the first failing
/// condition and is empty when the transition is legal.
struct Verdict {
  bool legal = false;
  std::string_view clause;
  explicit operator bool() const noexcept { return legal; }
};

/// Evaluates the legal-transition rules literally against `state`.
/// Throws Error if the vertex is out of range or the state has the wrong size.
Verdict check_transition(const ProcessTree& tree, const TreeState& state,
                         const Transition& t);

bool is_legal(const ProcessTree& tree, const TreeState& state, const Transition& t);

/// Returns the successor state; throws IllegalTransition naming the clause.
TreeState apply(const ProcessTree& tree, const TreeState& state, const Transition& t);

/// All legal transitions, ordered by vertex then F->O, O->C, F->C, C->F.
std::vector<Transition> legal_transitions(const ProcessTree& tree, const TreeState& state);

/// Replays `run` from `start`; throws IllegalTransition naming the step.
TreeState replay(const ProcessTree& tree, const TreeState& start, const Run& run);

TreeState invert_state(const TreeState& state);
/// (v, a, b) -> (v, b^-1, a^-1)
Transition invert_transition(const Transition& t) noexcept;
/// Reverse order, each transition inverted.
Run invert_run(const Run& run);

// ---------------------------------------------------------------------------
// Reduced successor relation.
//
// F->C and C->F are only taken when an Open parent's operator condition
// requires them (a Choice sibling is Open, or a Loop phase change), and every
// such move is immediately propagated to the whole subtree. F->O and O->C are
// taken whenever legal.

/// Legal F->C / C->F transitions whose parent is Open.
std::vector<Transition> dictated_transitions(const ProcessTree& tree,
                                             const TreeState& state);

/// A transition sequence together with the state it leads to.
struct Fragment {
  Run run;
  TreeState state;
};

/// Propagates the state of `vertex` (Closed or Future) to every descendant
/// still in the opposite state, in ascending index order. Throws Error if
/// `vertex` is Open or a descendant is Open.
Fragment fast_forward(const ProcessTree& tree, const TreeState& state, VertexId vertex);

/// One fragment per reduced edge, ordered like legal_transitions by the
/// fragment's first transition.
std::vector<Fragment> reduced_successors(const ProcessTree& tree, const TreeState& state);

/// Per-state subtree uniformity flags, reusable across calls.
class SubtreeSummary {
 public:
  void compute(const ProcessTree& tree, std::span<const VertexState> state);
  bool all_future(VertexId v) const { return (flags_[v] & kAllFuture) != 0; }
  bool all_closed(VertexId v) const { return (flags_[v] & kAllClosed) != 0; }

 private:
  static constexpr std::uint8_t kAllFuture = 1;
  static constexpr std::uint8_t kAllClosed = 2;
  std::vector<std::uint8_t> flags_;
};

/// Allocation-free successor generation used by the searches.
class ReducedExpander {
 public:
  explicit ReducedExpander(const ProcessTree& tree);

  /// Calls `emit(next_state, first_transition, weight)` for each reduced
  /// successor of `state`, where weight is the number of transitions in the
  /// fragment. `next_state` is only valid during the callback.
  void expand(std::span<const VertexState> state,
              const std::function<void(std::span<const VertexState>,
                                       const Transition&, std::uint32_t)>& emit);

  const ProcessTree& tree() const noexcept { return tree_; }

 private:
  const ProcessTree& tree_;
  SubtreeSummary summary_;
  std::vector<VertexState> scratch_;
};

/// Rebuilds the fragment of a reduced edge from its endpoint states: the
/// changed vertices in ascending order.
Run fragment_between(const TreeState& from, const TreeState& to);

enum class Semantics { Full, Reduced };

struct StateGraph {
  struct Edge {
    std::size_t from;
    std::size_t to;
    Run fragment;
  };
  /// Breadth-first discovery order; states[0] is the start state.
  std::vector<TreeState> states;
  std::vector<Edge> edges;
  /// True when exploration stopped at the state cap.
  bool truncated = false;
};

/// Breadth-first exploration from `start`, stopping (truncated = true)
/// once more than `state_cap` states would be stored.
StateGraph reachable_graph(const ProcessTree& tree, const TreeState& start,
                           std::size_t state_cap, Semantics semantics = Semantics::Reduced);

}  // namespace ptss
