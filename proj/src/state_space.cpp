#include "ptss/state_space.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "ptss/error.hpp"

namespace ptss {

namespace {

constexpr VertexState kF = VertexState::Future;
constexpr VertexState kO = VertexState::Open;
constexpr VertexState kC = VertexState::Closed;

constexpr std::string_view kLegal{};

template <typename Pred>
bool all_of(std::span<const VertexId> ids, Pred pred) {
  return std::all_of(ids.begin(), ids.end(), pred);
}

// Rules for F->O and O->C: parent Open (or root), child subtrees uniformly
// in the source state, and the parent operator's ordering condition on the
// sibling subtrees.
std::string_view open_close_violation(const ProcessTree& tree,
                                      std::span<const VertexState> s,
                                      const SubtreeSummary& sum, VertexId v,
                                      bool opening) {
  const VertexId p = tree.parent_or_none(v);
  if (p != kNoVertex && s[p] != kO)
    return opening ? "F->O requires the parent to be Open"
                   : "O->C requires the parent to be Open";
  for (VertexId c : tree.children(v)) {
    if (opening && !sum.all_future(c))
      return "F->O requires every child subtree to be all-Future";
    if (!opening && !sum.all_closed(c))
      return "O->C requires every child subtree to be all-Closed";
  }
  if (p == kNoVertex) return kLegal;

  const NodeLabel& parent_label = tree.label(p);
  if (!parent_label.is_operator()) return "parent vertex is not an operator";
  auto lsib = tree.lsib(v);
  auto rsib = tree.rsib(v);
  auto future = [&](VertexId u) { return sum.all_future(u); };
  auto closed = [&](VertexId u) { return sum.all_closed(u); };

  switch (parent_label.op()) {
    case Operator::Sequence:
      if (!all_of(lsib, closed)) return "sequence: a left sibling subtree is not all-Closed";
      if (!all_of(rsib, future)) return "sequence: a right sibling subtree is not all-Future";
      return kLegal;
    case Operator::ReverseSequence:
      if (!all_of(lsib, future)) return "reverse sequence: a left sibling subtree is not all-Future";
      if (!all_of(rsib, closed)) return "reverse sequence: a right sibling subtree is not all-Closed";
      return kLegal;
    case Operator::Choice:
      if (opening && !(all_of(lsib, future) && all_of(rsib, future)))
        return "choice: a sibling subtree is not all-Future";
      if (!opening && !(all_of(lsib, closed) && all_of(rsib, closed)))
        return "choice: a sibling subtree is not all-Closed";
      return kLegal;
    case Operator::Parallel:
      return kLegal;
    case Operator::Loop:
      if (!rsib.empty()) {
        if (opening && !all_of(rsib, future)) return "loop do-child: the redo subtree is not all-Future";
        if (!opening && !all_of(rsib, closed)) return "loop do-child: the redo subtree is not all-Closed";
      } else if (!lsib.empty()) {
        if (opening && !all_of(lsib, closed)) return "loop redo-child: the do subtree is not all-Closed";
        if (!opening && !all_of(lsib, future)) return "loop redo-child: the do subtree is not all-Future";
      }
      return kLegal;
  }
  return kLegal;
}

// Rules for F->C and C->F: free under a Future/Closed parent; under an Open
// parent only when the operator condition on sibling vertex states holds.
std::string_view skip_reset_violation(const ProcessTree& tree,
                                      std::span<const VertexState> s, VertexId v,
                                      bool skipping) {
  const VertexId p = tree.parent_or_none(v);
  if (p == kNoVertex) return "the root cannot move between Future and Closed";
  if (s[p] != kO) return kLegal;

  const NodeLabel& parent_label = tree.label(p);
  if (!parent_label.is_operator()) return "parent vertex is not an operator";
  const Operator op = parent_label.op();
  auto lsib = tree.lsib(v);
  auto rsib = tree.rsib(v);
  auto is_open = [&](VertexId u) { return s[u] == kO; };
  auto not_open = [&](VertexId u) { return s[u] != kO; };

  if (skipping) {
    if (op == Operator::Choice) {
      if (std::any_of(lsib.begin(), lsib.end(), is_open) ||
          std::any_of(rsib.begin(), rsib.end(), is_open))
        return kLegal;
      return "F->C under an Open choice requires an Open sibling";
    }
    if (op == Operator::Loop && !lsib.empty()) {
      if (all_of(lsib, is_open)) return kLegal;
      return "F->C of a loop redo-child requires the do-child to be Open";
    }
    return "F->C under an Open parent is only legal for choice or loop redo children";
  }
  if (op == Operator::Loop && !rsib.empty()) {
    if (all_of(rsib, is_open)) return kLegal;
    return "C->F of a loop do-child requires the redo-child to be Open";
  }
  if (op == Operator::Loop && !lsib.empty()) {
    if (all_of(lsib, not_open)) return kLegal;
    return "C->F of a loop redo-child requires the do-child not to be Open";
  }
  return "C->F under an Open parent is only legal for loop children";
}

std::string_view violation(const ProcessTree& tree, std::span<const VertexState> s,
                           const SubtreeSummary& sum, VertexId v, VertexState from,
                           VertexState to) {
  if (from == kC && to == kO) return "C->O is never legal";
  if (from == kO && to == kF) return "O->F is never legal";
  if (!is_vertex_move(from, to)) return "not a vertex-state move";
  if (s[v] != from) return "vertex is not in the transition's source state";
  if (to == kO || from == kO) return open_close_violation(tree, s, sum, v, from == kF);
  return skip_reset_violation(tree, s, v, from == kF);
}

void check_shape(const ProcessTree& tree, const TreeState& state) {
  if (state.size() != tree.size())
    throw Error("state has " + std::to_string(state.size()) + " entries, tree has " +
                std::to_string(tree.size()) + " vertices");
}

void check_vertex(const ProcessTree& tree, VertexId v) {
  if (v >= tree.size())
    throw Error("unknown vertex v" + std::to_string(v) + " (tree has " +
                std::to_string(tree.size()) + " vertices)");
}

constexpr std::pair<VertexState, VertexState> kMoves[] = {
    {kF, kO}, {kO, kC}, {kF, kC}, {kC, kF}};

}  // namespace

char to_char(VertexState s) noexcept {
  switch (s) {
    case VertexState::Future: return 'F';
    case VertexState::Open: return 'O';
    case VertexState::Closed: return 'C';
  }
  return '?';
}

TreeState TreeState::from_string(std::string_view text) {
  std::vector<VertexState> states;
  states.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'F': states.push_back(kF); break;
      case 'O': states.push_back(kO); break;
      case 'C': states.push_back(kC); break;
      default: throw Error(std::string("invalid vertex state '") + c + "'");
    }
  }
  return TreeState(std::move(states));
}

bool TreeState::uniform(VertexState s) const noexcept {
  return std::all_of(states_.begin(), states_.end(), [s](VertexState x) { return x == s; });
}

std::string TreeState::to_string() const {
  std::string out;
  out.reserve(states_.size());
  for (VertexState s : states_) out += to_char(s);
  return out;
}

std::size_t TreeStateHash::operator()(const TreeState& s) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (VertexState x : s.values()) {
    h ^= static_cast<std::uint64_t>(x);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

bool is_vertex_move(VertexState from, VertexState to) noexcept {
  return (from == kF && to == kO) || (from == kO && to == kC) ||
         (from == kF && to == kC) || (from == kC && to == kF);
}

std::string to_string(const Transition& t) {
  std::string out = "v" + std::to_string(t.vertex) + ' ';
  out += to_char(t.from);
  out += "->";
  out += to_char(t.to);
  return out;
}

std::string format_run(const Run& run) {
  std::string out;
  for (const Transition& t : run) {
    out += to_string(t);
    out += '\n';
  }
  return out;
}

Run parse_run(std::string_view text) {
  Run run;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string_view body = std::string_view(line).substr(first, last - first + 1);
    // "v<digits> X->Y"
    if (body.size() < 7 || body[0] != 'v') throw Error("malformed transition '" + line + "'");
    auto space = body.find(' ');
    if (space == std::string_view::npos || body.size() != space + 5 ||
        body.substr(space + 2, 2) != "->")
      throw Error("malformed transition '" + line + "'");
    VertexId v = 0;
    auto [ptr, ec] = std::from_chars(body.data() + 1, body.data() + space, v);
    if (ec != std::errc() || ptr != body.data() + space)
      throw Error("malformed vertex in '" + line + "'");
    auto from = TreeState::from_string(body.substr(space + 1, 1))[0];
    auto to = TreeState::from_string(body.substr(space + 4, 1))[0];
    if (!is_vertex_move(from, to)) throw Error("not a vertex-state move: '" + line + "'");
    run.push_back({v, from, to});
  }
  return run;
}

TreeState initial_state(const ProcessTree& tree) { return TreeState(tree.size(), kF); }
TreeState final_state(const ProcessTree& tree) { return TreeState(tree.size(), kC); }

void SubtreeSummary::compute(const ProcessTree& tree, std::span<const VertexState> state) {
  const std::size_t n = tree.size();
  flags_.resize(n);
  for (VertexId v = static_cast<VertexId>(n); v-- > 0;) {
    std::uint8_t f = state[v] == kF ? kAllFuture : state[v] == kC ? kAllClosed : 0;
    for (VertexId c : tree.children(v)) f &= flags_[c];
    flags_[v] = f;
  }
}

Verdict check_transition(const ProcessTree& tree, const TreeState& state,
                         const Transition& t) {
  check_shape(tree, state);
  check_vertex(tree, t.vertex);
  SubtreeSummary sum;
  sum.compute(tree, state.values());
  auto clause = violation(tree, state.values(), sum, t.vertex, t.from, t.to);
  return {clause.empty(), clause};
}

bool is_legal(const ProcessTree& tree, const TreeState& state, const Transition& t) {
  return check_transition(tree, state, t).legal;
}

TreeState apply(const ProcessTree& tree, const TreeState& state, const Transition& t) {
  Verdict verdict = check_transition(tree, state, t);
  if (!verdict)
    throw IllegalTransition("illegal transition " + to_string(t) + " in state " +
                            state.to_string() + ": " + std::string(verdict.clause));
  TreeState next = state;
  next[t.vertex] = t.to;
  return next;
}

std::vector<Transition> legal_transitions(const ProcessTree& tree, const TreeState& state) {
  check_shape(tree, state);
  SubtreeSummary sum;
  sum.compute(tree, state.values());
  std::vector<Transition> out;
  for (VertexId v = 0; v < tree.size(); ++v)
    for (auto [from, to] : kMoves)
      if (state[v] == from && violation(tree, state.values(), sum, v, from, to).empty())
        out.push_back({v, from, to});
  return out;
}

TreeState replay(const ProcessTree& tree, const TreeState& start, const Run& run) {
  TreeState s = start;
  for (std::size_t i = 0; i < run.size(); ++i) {
    check_vertex(tree, run[i].vertex);
    Verdict verdict = check_transition(tree, s, run[i]);
    if (!verdict)
      throw IllegalTransition("step " + std::to_string(i + 1) + " (" + to_string(run[i]) +
                              ") is illegal in state " + s.to_string() + ": " +
                              std::string(verdict.clause));
    s[run[i].vertex] = run[i].to;
  }
  return s;
}

TreeState invert_state(const TreeState& state) {
  TreeState out = state;
  for (auto& s : out.values()) s = invert_vertex_state(s);
  return out;
}

Transition invert_transition(const Transition& t) noexcept {
  return {t.vertex, invert_vertex_state(t.to), invert_vertex_state(t.from)};
}

Run invert_run(const Run& run) {
  Run out;
  out.reserve(run.size());
  for (auto it = run.rbegin(); it != run.rend(); ++it) out.push_back(invert_transition(*it));
  return out;
}

std::vector<Transition> dictated_transitions(const ProcessTree& tree, const TreeState& state) {
  std::vector<Transition> out;
  for (const Transition& t : legal_transitions(tree, state)) {
    bool skip_or_reset = (t.from == kF && t.to == kC) || (t.from == kC && t.to == kF);
    VertexId p = tree.parent_or_none(t.vertex);
    if (skip_or_reset && p != kNoVertex && state[p] == kO) out.push_back(t);
  }
  return out;
}

Fragment fast_forward(const ProcessTree& tree, const TreeState& state, VertexId vertex) {
  check_shape(tree, state);
  check_vertex(tree, vertex);
  const VertexState target = state[vertex];
  if (target == kO) throw Error("cannot fast-forward below an Open vertex");
  const VertexState source = invert_vertex_state(target);
  Fragment out{{}, state};
  for (VertexId d : tree.desc(vertex)) {
    if (out.state[d] == kO)
      throw Error("cannot fast-forward over Open descendant v" + std::to_string(d));
    if (out.state[d] == source) {
      out.run.push_back({d, source, target});
      out.state[d] = target;
    }
  }
  return out;
}

std::vector<Fragment> reduced_successors(const ProcessTree& tree, const TreeState& state) {
  check_shape(tree, state);
  std::vector<Fragment> out;
  ReducedExpander expander(tree);
  expander.expand(state.values(), [&](std::span<const VertexState> next, const Transition&,
                                      std::uint32_t) {
    TreeState to(std::vector<VertexState>(next.begin(), next.end()));
    out.push_back({fragment_between(state, to), std::move(to)});
  });
  return out;
}

ReducedExpander::ReducedExpander(const ProcessTree& tree)
    : tree_(tree), scratch_(tree.size()) {}

void ReducedExpander::expand(
    std::span<const VertexState> s,
    const std::function<void(std::span<const VertexState>, const Transition&, std::uint32_t)>&
        emit) {
  summary_.compute(tree_, s);
  const std::size_t n = tree_.size();
  for (VertexId v = 0; v < n; ++v) {
    for (auto [from, to] : kMoves) {
      if (s[v] != from) continue;
      const bool single = from == kO || to == kO;
      if (!single) {
        VertexId p = tree_.parent_or_none(v);
        if (p == kNoVertex || s[p] != kO) continue;
      }
      if (!violation(tree_, s, summary_, v, from, to).empty()) continue;
      std::copy(s.begin(), s.end(), scratch_.begin());
      scratch_[v] = to;
      std::uint32_t weight = 1;
      if (!single) {
        for (VertexId d : tree_.desc(v)) {
          if (scratch_[d] == from) {
            scratch_[d] = to;
            ++weight;
          } else if (scratch_[d] == kO) {
            throw Error("reduced expansion reached a state with an Open vertex below v" +
                        std::to_string(v));
          }
        }
      }
      emit(scratch_, Transition{v, from, to}, weight);
    }
  }
}

Run fragment_between(const TreeState& from, const TreeState& to) {
  Run run;
  for (VertexId v = 0; v < from.size(); ++v)
    if (from[v] != to[v]) run.push_back({v, from[v], to[v]});
  return run;
}

StateGraph reachable_graph(const ProcessTree& tree, const TreeState& start,
                           std::size_t state_cap, Semantics semantics) {
  check_shape(tree, start);
  if (state_cap == 0) throw Error("state cap must be positive");
  StateGraph graph;
  std::unordered_map<TreeState, std::size_t, TreeStateHash> ids;
  graph.states.push_back(start);
  ids.emplace(start, 0);

  auto visit = [&](std::size_t from, TreeState next, Run fragment) -> bool {
    auto it = ids.find(next);
    std::size_t to;
    if (it != ids.end()) {
      to = it->second;
    } else {
      if (graph.states.size() >= state_cap) {
        graph.truncated = true;
        return false;
      }
      to = graph.states.size();
      ids.emplace(next, to);
      graph.states.push_back(std::move(next));
    }
    graph.edges.push_back({from, to, std::move(fragment)});
    return true;
  };

  for (std::size_t i = 0; i < graph.states.size() && !graph.truncated; ++i) {
    const TreeState current = graph.states[i];
    if (semantics == Semantics::Full) {
      for (const Transition& t : legal_transitions(tree, current)) {
        TreeState next = current;
        next[t.vertex] = t.to;
        if (!visit(i, std::move(next), Run{t})) break;
      }
    } else {
      for (Fragment& f : reduced_successors(tree, current))
        if (!visit(i, std::move(f.state), std::move(f.run))) break;
    }
  }
  return graph;
}

}  // namespace ptss
