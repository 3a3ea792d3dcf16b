#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ptss/state_space.hpp"
#include "ptss/tree.hpp"

namespace ptss {

/// A sequence of activity labels; tau never appears.
using Trace = std::vector<std::string>;
using Language = std::set<Trace>;

inline constexpr std::size_t kDefaultTraceLimit = 1'000'000;
inline constexpr unsigned kDefaultLoopBound = 2;
/// Redo counters are 8-bit.
inline constexpr unsigned kMaxLoopBound = 100;

/// "<a,b,c>", empty trace "<>".
std::string format_trace(const Trace& trace);
Trace parse_trace(std::string_view text);

/// All interleavings of the given traces. Throws LanguageOverflow when the
/// result would exceed `limit` traces.
Language shuffle(std::span<const Trace> traces, std::size_t limit = kDefaultTraceLimit);

/// Union over all pairs of shuffle(a_i, b_j).
Language shuffle(const Language& a, const Language& b, std::size_t limit = kDefaultTraceLimit);

class Dawg;

/// Minimal acyclic automaton of a finite language. Structure is shared, so
/// languages far too large to list fit in a few thousand states. Two
/// automata compare equal exactly when their languages do.
class LanguageAutomaton {
 public:
  /// Number of traces, saturating at `cap`.
  std::size_t count(std::size_t cap = SIZE_MAX) const;
  bool contains(const Trace& trace) const;
  /// Visits every trace once, in lexicographic order of activity names.
  void for_each(const std::function<void(const Trace&)>& visit) const;
  /// Throws LanguageOverflow when there are more than `limit` traces.
  Language traces(std::size_t limit = kDefaultTraceLimit) const;
  /// States allocated while building, intermediate results included.
  std::size_t states() const;

  friend bool operator==(const LanguageAutomaton& a, const LanguageAutomaton& b);

 private:
  friend class AutomatonBuilder;
  std::shared_ptr<const Dawg> dawg_;
  std::uint32_t root_ = 0;
};

LanguageAutomaton language_automaton(const ProcessTree& tree, unsigned bound);
LanguageAutomaton statespace_automaton(const ProcessTree& tree, unsigned bound);

/// Denotational language restricted to runs in which every loop vertex
/// executes its redo child at most `bound` times in total.
Language enumerate_language(const ProcessTree& tree, unsigned bound,
                            std::size_t limit = kDefaultTraceLimit);

/// Replays `run` from the initial state (throws IllegalTransition) and
/// returns the labels of activity leaves in the order they open.
Trace project_run(const ProcessTree& tree, const Run& run);

/// Projection of all reduced runs from F to C in which every loop vertex
/// starts its redo child at most `bound` times in total.
Language statespace_language(const ProcessTree& tree, unsigned bound,
                             std::size_t limit = kDefaultTraceLimit);

/// Every trace reversed.
Language reverse_traces(const Language& language);

}  // namespace ptss
