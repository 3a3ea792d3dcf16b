#include "ptss/language.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

#include "ptss/error.hpp"
#include "ptss/packed_state.hpp"

namespace ptss {

namespace {

void check_size(const Language& l, std::size_t limit) {
  if (l.size() > limit) throw LanguageOverflow(limit);
}

// C(n, k) saturating at `cap`.
std::size_t binomial_capped(std::size_t n, std::size_t k, std::size_t cap) {
  k = std::min(k, n - k);
  long double r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (r > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::size_t>(r + 0.5L);
}

void interleave(const Trace& a, std::size_t i, const Trace& b, std::size_t j, Trace& prefix,
                Language& out) {
  if (i == a.size() && j == b.size()) {
    out.insert(prefix);
    return;
  }
  if (i < a.size()) {
    prefix.push_back(a[i]);
    interleave(a, i + 1, b, j, prefix, out);
    prefix.pop_back();
  }
  if (j < b.size()) {
    prefix.push_back(b[j]);
    interleave(a, i, b, j + 1, prefix, out);
    prefix.pop_back();
  }
}

void shuffle_into(const Trace& a, const Trace& b, Language& out, std::size_t limit) {
  if (binomial_capped(a.size() + b.size(), a.size(), limit) > limit)
    throw LanguageOverflow(limit);
  Trace prefix;
  prefix.reserve(a.size() + b.size());
  interleave(a, 0, b, 0, prefix, out);
  check_size(out, limit);
}

}  // namespace

// Hash-consed acyclic DFA. Every state is registered by its finality and
// sorted outgoing edges, and children are registered first, so two states
// are the same id exactly when their right languages agree.
class Dawg {
 public:
  using Id = std::uint32_t;
  using Sym = std::uint32_t;
  static constexpr Id kEmpty = 0;
  static constexpr Id kEpsilon = 1;

  struct Edge {
    Sym sym;
    Id to;
  };
  struct State {
    bool final;
    std::vector<Edge> next;  // ascending sym, no empty targets
  };

  explicit Dawg(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    make(false, {});
    make(true, {});
  }

  const std::vector<std::string>& symbols() const { return symbols_; }
  const State& state(Id id) const { return states_[id]; }
  std::size_t size() const { return states_.size(); }

  Sym symbol(const std::string& name) const {
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), name);
    if (it == symbols_.end() || *it != name) return kNoSym;
    return static_cast<Sym>(it - symbols_.begin());
  }

  Id make(bool final, std::vector<Edge> next) {
    std::erase_if(next, [](const Edge& e) { return e.to == kEmpty; });
    if (!final && next.empty() && !states_.empty()) return kEmpty;
    std::string key(1, final ? '1' : '0');
    key.reserve(1 + next.size() * 8);
    for (const Edge& e : next) {
      key.append(reinterpret_cast<const char*>(&e.sym), sizeof e.sym);
      key.append(reinterpret_cast<const char*>(&e.to), sizeof e.to);
    }
    auto [it, fresh] = registry_.try_emplace(std::move(key), static_cast<Id>(states_.size()));
    if (fresh) states_.push_back({final, std::move(next)});
    return it->second;
  }

  Id prepend(Sym s, Id to) { return make(false, {{s, to}}); }

  Id unite(Id a, Id b) {
    if (a == b || b == kEmpty) return a;
    if (a == kEmpty) return b;
    if (a > b) std::swap(a, b);
    const auto key = pair_key(a, b);
    if (auto it = union_.find(key); it != union_.end()) return it->second;
    const State x = states_[a], y = states_[b];
    std::vector<Edge> next;
    std::size_t i = 0, j = 0;
    while (i < x.next.size() || j < y.next.size()) {
      if (j == y.next.size() || (i < x.next.size() && x.next[i].sym < y.next[j].sym)) {
        next.push_back(x.next[i++]);
      } else if (i == x.next.size() || y.next[j].sym < x.next[i].sym) {
        next.push_back(y.next[j++]);
      } else {
        next.push_back({x.next[i].sym, unite(x.next[i].to, y.next[j].to)});
        ++i, ++j;
      }
    }
    const Id r = make(x.final || y.final, std::move(next));
    union_.emplace(key, r);
    return r;
  }

  Id concat(Id a, Id b) {
    if (a == kEmpty || b == kEmpty) return kEmpty;
    if (b == kEpsilon) return a;
    if (a == kEpsilon) return b;
    const auto key = pair_key(a, b);
    if (auto it = concat_.find(key); it != concat_.end()) return it->second;
    const State x = states_[a];
    std::vector<Edge> next;
    for (const Edge& e : x.next) next.push_back({e.sym, concat(e.to, b)});
    Id r = make(false, std::move(next));
    if (x.final) r = unite(r, b);
    concat_.emplace(key, r);
    return r;
  }

  Id shuffle(Id a, Id b) {
    if (a == kEmpty || b == kEmpty) return kEmpty;
    if (a == kEpsilon) return b;
    if (b == kEpsilon) return a;
    if (a > b) std::swap(a, b);
    const auto key = pair_key(a, b);
    if (auto it = shuffle_.find(key); it != shuffle_.end()) return it->second;
    const State x = states_[a], y = states_[b];
    std::map<Sym, Id> by_sym;
    auto put = [&](Sym s, Id to) {
      auto [it, fresh] = by_sym.try_emplace(s, to);
      if (!fresh) it->second = unite(it->second, to);
    };
    for (const Edge& e : x.next) put(e.sym, shuffle(e.to, b));
    for (const Edge& e : y.next) put(e.sym, shuffle(a, e.to));
    std::vector<Edge> next;
    next.reserve(by_sym.size());
    for (auto [s, to] : by_sym) next.push_back({s, to});
    const Id r = make(x.final && y.final, std::move(next));
    shuffle_.emplace(key, r);
    return r;
  }

  static constexpr Sym kNoSym = 0xffffffffu;

 private:
  static std::uint64_t pair_key(Id a, Id b) { return (std::uint64_t{a} << 32) | b; }

  std::vector<std::string> symbols_;
  std::vector<State> states_;
  std::unordered_map<std::string, Id> registry_;
  std::unordered_map<std::uint64_t, Id> union_, concat_, shuffle_;
};

class AutomatonBuilder {
 public:
  static LanguageAutomaton wrap(std::shared_ptr<Dawg> dawg, Dawg::Id root) {
    LanguageAutomaton a;
    a.dawg_ = std::move(dawg);
    a.root_ = root;
    return a;
  }
};

namespace {

using Id = Dawg::Id;

std::shared_ptr<Dawg> dawg_for(const ProcessTree& tree) {
  std::vector<std::string> names;
  for (VertexId v = 0; v < tree.size(); ++v)
    if (tree.label(v).is_activity()) names.push_back(tree.label(v).name());
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return std::make_shared<Dawg>(std::move(names));
}

// Redo executions so far, one counter per loop vertex of the tree.
using Usage = std::vector<std::uint8_t>;

// Sub-languages split by the loop budget they consume.
using Weighted = std::map<Usage, Id>;

class Enumerator {
 public:
  Enumerator(const ProcessTree& tree, unsigned bound, Dawg& dawg)
      : tree_(tree), bound_(bound), dawg_(dawg), slot_(tree.size(), 0), repeated_(tree.size()) {
    for (VertexId v = 0; v < tree.size(); ++v) {
      if (tree.label(v).is_operator(Operator::Loop)) slot_[v] = loops_++;
      // BFS order puts parents first
      const VertexId p = tree.parent_or_none(v);
      if (p != kNoVertex)
        repeated_[v] = repeated_[p] || tree.label(p).is_operator(Operator::Loop);
    }
  }

  Id run() { return of(tree_.root()).begin()->second; }

 private:
  Weighted of(VertexId v) {
    Weighted out = build(v);
    // budgets of inner loops only matter while v can run again
    if (!repeated_[v] && out.size() > 1) {
      Id all = Dawg::kEmpty;
      for (auto& [u, id] : out) all = dawg_.unite(all, id);
      out = {{Usage(loops_, 0), all}};
    }
    return out;
  }

  Weighted build(VertexId v) {
    const NodeLabel& label = tree_.label(v);
    const Usage zero(loops_, 0);
    if (label.is_tau()) return {{zero, Dawg::kEpsilon}};
    if (label.is_activity())
      return {{zero, dawg_.prepend(dawg_.symbol(label.name()), Dawg::kEpsilon)}};

    auto kids = tree_.children(v);
    std::vector<Weighted> sub;
    sub.reserve(kids.size());
    for (VertexId c : kids) sub.push_back(of(c));

    switch (label.op()) {
      case Operator::Sequence: return fold_concat(sub.begin(), sub.end());
      case Operator::ReverseSequence: return fold_concat(sub.rbegin(), sub.rend());
      case Operator::Choice: {
        Weighted out;
        for (auto& l : sub)
          for (auto& [u, id] : l) add(out, u, id);
        return out;
      }
      case Operator::Parallel: {
        Weighted out = std::move(sub.front());
        for (std::size_t i = 1; i < sub.size(); ++i) out = combine(out, sub[i], true);
        return out;
      }
      case Operator::Loop: {
        // do (redo do)^i, each redo charged to this loop
        Weighted charged;
        for (const auto& [used, id] : combine(sub[1], sub[0], false)) {
          Usage u = used;
          if (++u[slot_[v]] > bound_) continue;
          add(charged, u, id);
        }
        Weighted out = sub[0];
        Weighted layer = sub[0];
        for (unsigned i = 0; i < bound_ && !layer.empty(); ++i) {
          layer = combine(layer, charged, false);
          for (auto& [u, id] : layer) add(out, u, id);
        }
        return out;
      }
    }
    return {};
  }

  void add(Weighted& w, const Usage& u, Id id) {
    auto [it, fresh] = w.try_emplace(u, id);
    if (!fresh) it->second = dawg_.unite(it->second, id);
  }

  Weighted combine(const Weighted& a, const Weighted& b, bool interleave) {
    Weighted out;
    Usage sum(loops_);
    for (auto& [u1, x] : a)
      for (auto& [u2, y] : b) {
        bool fits = true;
        for (std::size_t i = 0; i < loops_ && fits; ++i) {
          sum[i] = static_cast<std::uint8_t>(u1[i] + u2[i]);
          fits = sum[i] <= bound_;
        }
        if (fits) add(out, sum, interleave ? dawg_.shuffle(x, y) : dawg_.concat(x, y));
      }
    return out;
  }

  template <typename It>
  Weighted fold_concat(It first, It last) {
    Weighted out{{Usage(loops_, 0), Dawg::kEpsilon}};
    for (; first != last; ++first) out = combine(out, *first, false);
    return out;
  }

  const ProcessTree& tree_;
  unsigned bound_;
  Dawg& dawg_;
  std::vector<std::uint32_t> slot_;
  std::vector<bool> repeated_;
  std::uint32_t loops_ = 0;
};

// Memoized suffix languages over (state, per-loop redo counters). Counters
// never reset, so every redo spends the loop's budget for the whole run.
class StateSpaceEnumerator {
 public:
  StateSpaceEnumerator(const ProcessTree& tree, unsigned bound, Dawg& dawg)
      : tree_(tree),
        bound_(bound),
        dawg_(dawg),
        codec_(tree.size()),
        expander_(tree),
        loop_slot_(tree.size(), kNoSlot) {
    for (VertexId v = 0; v < tree.size(); ++v)
      if (tree.label(v).is_operator(Operator::Loop)) loop_slot_[v] = loops_++;
  }

  Id run() {
    Node start{codec_.pack(initial_state(tree_)), std::vector<std::uint8_t>(loops_, 0)};
    return suffix(start);
  }

 private:
  static constexpr std::uint32_t kNoSlot = 0xffffffffu;

  struct Node {
    std::vector<std::uint64_t> key;
    std::vector<std::uint8_t> counters;
    friend bool operator<(const Node& a, const Node& b) {
      return std::tie(a.key, a.counters) < std::tie(b.key, b.counters);
    }
  };

  Id suffix(const Node& node) {
    if (auto it = memo_.find(node); it != memo_.end()) return it->second;
    if (!on_stack_.insert(node).second)
      throw Error("bounded run graph contains a cycle; redo bound is not effective");

    const TreeState state = codec_.unpack(node.key);
    struct Step {
      Node next;
      Dawg::Sym label;
    };
    std::vector<Step> steps;
    expander_.expand(state.values(), [&](std::span<const VertexState> next,
                                         const Transition& t, std::uint32_t) {
      std::vector<std::uint8_t> counters = node.counters;
      const VertexId p = tree_.parent_or_none(t.vertex);
      const bool opening = t.from == VertexState::Future && t.to == VertexState::Open;
      if (opening && p != kNoVertex && loop_slot_[p] != kNoSlot &&
          tree_.position(t.vertex) == 1) {
        auto& c = counters[loop_slot_[p]];
        if (c >= bound_) return;
        ++c;
      }
      Step step{{std::vector<std::uint64_t>(codec_.words()), std::move(counters)}, Dawg::kNoSym};
      codec_.pack(next, step.next.key);
      if (opening && tree_.label(t.vertex).is_activity())
        step.label = dawg_.symbol(tree_.label(t.vertex).name());
      steps.push_back(std::move(step));
    });

    Id out = state.uniform(VertexState::Closed) ? Dawg::kEpsilon : Dawg::kEmpty;
    for (const Step& step : steps) {
      const Id rest = suffix(step.next);
      out = dawg_.unite(out, step.label == Dawg::kNoSym ? rest : dawg_.prepend(step.label, rest));
    }
    on_stack_.erase(node);
    memo_.emplace(node, out);
    return out;
  }

  const ProcessTree& tree_;
  unsigned bound_;
  Dawg& dawg_;
  StateCodec codec_;
  ReducedExpander expander_;
  std::vector<std::uint32_t> loop_slot_;
  std::uint32_t loops_ = 0;
  std::map<Node, Id> memo_;
  std::set<Node> on_stack_;
};

}  // namespace

std::string format_trace(const Trace& trace) {
  std::string out = "<";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) out += ',';
    out += trace[i];
  }
  out += '>';
  return out;
}

Trace parse_trace(std::string_view text) {
  auto strip = [](std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return std::string_view{};
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  };
  text = strip(text);
  if (text.size() < 2 || text.front() != '<' || text.back() != '>')
    throw Error("trace must be written as <a,b,...>");
  text = strip(text.substr(1, text.size() - 2));
  Trace out;
  if (text.empty()) return out;
  while (true) {
    auto comma = text.find(',');
    auto item = strip(text.substr(0, comma));
    if (!is_activity_name(item)) throw Error("invalid activity '" + std::string(item) + "'");
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

Language shuffle(std::span<const Trace> traces, std::size_t limit) {
  Language out{Trace{}};
  for (const Trace& t : traces) {
    Language next;
    for (const Trace& acc : out) shuffle_into(acc, t, next, limit);
    out = std::move(next);
  }
  return out;
}

Language shuffle(const Language& a, const Language& b, std::size_t limit) {
  Language out;
  for (const Trace& x : a)
    for (const Trace& y : b) shuffle_into(x, y, out, limit);
  return out;
}

std::size_t LanguageAutomaton::count(std::size_t cap) const {
  std::vector<std::size_t> memo(dawg_->size(), SIZE_MAX);
  std::function<std::size_t(Id)> walk = [&](Id id) {
    if (memo[id] != SIZE_MAX) return memo[id];
    const auto& s = dawg_->state(id);
    std::size_t n = s.final ? 1 : 0;
    for (const auto& e : s.next) {
      const std::size_t m = walk(e.to);
      n = m > cap - n ? cap : n + m;
    }
    return memo[id] = std::min(cap, n);
  };
  return walk(root_);
}

bool LanguageAutomaton::contains(const Trace& trace) const {
  Id at = root_;
  for (const std::string& a : trace) {
    const Dawg::Sym s = dawg_->symbol(a);
    const auto& next = dawg_->state(at).next;
    auto it = std::find_if(next.begin(), next.end(), [&](const auto& e) { return e.sym == s; });
    if (s == Dawg::kNoSym || it == next.end()) return false;
    at = it->to;
  }
  return dawg_->state(at).final;
}

void LanguageAutomaton::for_each(const std::function<void(const Trace&)>& visit) const {
  Trace prefix;
  std::function<void(Id)> walk = [&](Id id) {
    const auto& s = dawg_->state(id);
    if (s.final) visit(prefix);
    for (const auto& e : s.next) {
      prefix.push_back(dawg_->symbols()[e.sym]);
      walk(e.to);
      prefix.pop_back();
    }
  };
  walk(root_);
}

Language LanguageAutomaton::traces(std::size_t limit) const {
  if (count(limit == SIZE_MAX ? limit : limit + 1) > limit) throw LanguageOverflow(limit);
  Language out;
  for_each([&](const Trace& t) { out.insert(out.end(), t); });
  return out;
}

std::size_t LanguageAutomaton::states() const { return dawg_->size(); }

bool operator==(const LanguageAutomaton& a, const LanguageAutomaton& b) {
  // both sides are minimal, so equal languages means isomorphic automata
  std::unordered_map<Id, Id> seen;
  std::function<bool(Id, Id)> same = [&](Id x, Id y) {
    if (auto it = seen.find(x); it != seen.end()) return it->second == y;
    const auto& s = a.dawg_->state(x);
    const auto& t = b.dawg_->state(y);
    if (s.final != t.final || s.next.size() != t.next.size()) return false;
    for (std::size_t i = 0; i < s.next.size(); ++i) {
      if (a.dawg_->symbols()[s.next[i].sym] != b.dawg_->symbols()[t.next[i].sym]) return false;
      if (!same(s.next[i].to, t.next[i].to)) return false;
    }
    seen.emplace(x, y);
    return true;
  };
  return same(a.root_, b.root_);
}

LanguageAutomaton language_automaton(const ProcessTree& tree, unsigned bound) {
  if (bound > kMaxLoopBound) throw Error("loop bound too large");
  auto dawg = dawg_for(tree);
  const Id root = Enumerator(tree, bound, *dawg).run();
  return AutomatonBuilder::wrap(std::move(dawg), root);
}

LanguageAutomaton statespace_automaton(const ProcessTree& tree, unsigned bound) {
  if (bound > kMaxLoopBound) throw Error("loop bound too large");
  auto dawg = dawg_for(tree);
  const Id root = StateSpaceEnumerator(tree, bound, *dawg).run();
  return AutomatonBuilder::wrap(std::move(dawg), root);
}

Language enumerate_language(const ProcessTree& tree, unsigned bound, std::size_t limit) {
  return language_automaton(tree, bound).traces(limit);
}

Trace project_run(const ProcessTree& tree, const Run& run) {
  replay(tree, initial_state(tree), run);
  Trace out;
  for (const Transition& t : run)
    if (t.from == VertexState::Future && t.to == VertexState::Open &&
        tree.label(t.vertex).is_activity())
      out.push_back(tree.label(t.vertex).name());
  return out;
}

Language statespace_language(const ProcessTree& tree, unsigned bound, std::size_t limit) {
  return statespace_automaton(tree, bound).traces(limit);
}

Language reverse_traces(const Language& language) {
  Language out;
  for (Trace t : language) {
    std::reverse(t.begin(), t.end());
    out.insert(std::move(t));
  }
  return out;
}

}  // namespace ptss
