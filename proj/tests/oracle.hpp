#pragma once
// Reference implementations used only by the tests. They read nothing from
// the library but labels and parent links, and are written for clarity over
// speed.

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "ptss/state_space.hpp"
#include "ptss/tree.hpp"

namespace oracle {

using ptss::Operator;
using ptss::ProcessTree;
using ptss::Transition;
using ptss::VertexState;
using S = VertexState;

// Plain adjacency copy of a tree.
struct Shape {
  std::vector<int> parent;
  std::vector<std::vector<int>> kids;
  std::vector<ptss::NodeLabel> label;

  explicit Shape(const ProcessTree& t) {
    const int n = static_cast<int>(t.size());
    parent.assign(n, -1);
    kids.assign(n, {});
    for (int v = 0; v < n; ++v) {
      label.push_back(t.label(static_cast<ptss::VertexId>(v)));
      if (v == 0) continue;
      parent[v] = static_cast<int>(t.parent_or_none(static_cast<ptss::VertexId>(v)));
    }
    // children in ascending index, which is left to right for BFS indexing
    for (int v = 1; v < n; ++v) kids[parent[v]].push_back(v);
  }

  int size() const { return static_cast<int>(parent.size()); }

  bool par_is(int v, Operator op) const {
    return parent[v] >= 0 && label[parent[v]].is_operator(op);
  }

  std::vector<int> lsib(int v) const {
    std::vector<int> out;
    if (parent[v] < 0) return out;
    for (int w : kids[parent[v]]) {
      if (w == v) break;
      out.push_back(w);
    }
    return out;
  }
  std::vector<int> rsib(int v) const {
    std::vector<int> out;
    if (parent[v] < 0) return out;
    bool after = false;
    for (int w : kids[parent[v]]) {
      if (after) out.push_back(w);
      if (w == v) after = true;
    }
    return out;
  }
  std::vector<int> sib(int v) const {
    auto l = lsib(v), r = rsib(v);
    l.insert(l.end(), r.begin(), r.end());
    return l;
  }
  std::vector<int> descendants(int v) const {
    std::vector<int> out;
    for (int c : kids[v]) {
      out.push_back(c);
      auto d = descendants(c);
      out.insert(out.end(), d.begin(), d.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

// s(T|v) == X everywhere
inline bool uniform(const Shape& sh, const std::vector<S>& s, int v, S x) {
  if (s[v] != x) return false;
  for (int c : sh.kids[v])
    if (!uniform(sh, s, c, x)) return false;
  return true;
}

inline bool all_uniform(const Shape& sh, const std::vector<S>& s, const std::vector<int>& vs,
                        S x) {
  for (int w : vs)
    if (!uniform(sh, s, w, x)) return false;
  return true;
}

inline bool all_root(const std::vector<S>& s, const std::vector<int>& vs, S x) {
  for (int w : vs)
    if (s[w] != x) return false;
  return true;
}

// Def. 5, clause by clause.
inline bool legal(const Shape& sh, const std::vector<S>& s, int v, S from, S to) {
  if (s[v] != from) return false;
  const int p = sh.parent[v];
  const bool is_loop_parent = sh.par_is(v, Operator::Loop);
  const auto ls = sh.lsib(v), rs = sh.rsib(v);

  if (from == S::Closed && to == S::Future) {
    if (p < 0) return false;  // s(par(root)) is undefined
    if (s[p] != S::Open) return true;
    if (is_loop_parent && !rs.empty()) return all_root(s, rs, S::Open);
    if (is_loop_parent && !ls.empty()) {
      for (int w : ls)
        if (s[w] == S::Open) return false;
      return true;
    }
    return false;
  }
  if (from == S::Future && to == S::Closed) {
    if (p < 0) return false;
    if (s[p] != S::Open) return true;
    if (sh.par_is(v, Operator::Choice)) {
      for (int w : sh.sib(v))
        if (s[w] == S::Open) return true;
      return false;
    }
    if (is_loop_parent && !ls.empty()) return all_root(s, ls, S::Open);
    return false;
  }
  if (from == S::Future && to == S::Open) {
    if (p >= 0 && s[p] != S::Open) return false;
    if (!all_uniform(sh, s, sh.kids[v], S::Future)) return false;
    if (p < 0 || sh.par_is(v, Operator::Parallel)) return true;
    if (sh.par_is(v, Operator::Sequence))
      return all_uniform(sh, s, ls, S::Closed) && all_uniform(sh, s, rs, S::Future);
    if (sh.par_is(v, Operator::ReverseSequence))
      return all_uniform(sh, s, ls, S::Future) && all_uniform(sh, s, rs, S::Closed);
    if (sh.par_is(v, Operator::Choice)) return all_uniform(sh, s, sh.sib(v), S::Future);
    if (!rs.empty()) return all_uniform(sh, s, rs, S::Future);  // do-child
    return all_uniform(sh, s, ls, S::Closed);                    // redo-child
  }
  if (from == S::Open && to == S::Closed) {
    if (p >= 0 && s[p] != S::Open) return false;
    if (!all_uniform(sh, s, sh.kids[v], S::Closed)) return false;
    if (p < 0 || sh.par_is(v, Operator::Parallel)) return true;
    if (sh.par_is(v, Operator::Sequence))
      return all_uniform(sh, s, ls, S::Closed) && all_uniform(sh, s, rs, S::Future);
    if (sh.par_is(v, Operator::ReverseSequence))
      return all_uniform(sh, s, ls, S::Future) && all_uniform(sh, s, rs, S::Closed);
    if (sh.par_is(v, Operator::Choice)) return all_uniform(sh, s, sh.sib(v), S::Closed);
    if (!rs.empty()) return all_uniform(sh, s, rs, S::Closed);
    return all_uniform(sh, s, ls, S::Future);
  }
  return false;  // C->O, O->F and non-moves
}

inline constexpr std::pair<S, S> kMoves[4] = {
    {S::Future, S::Open}, {S::Open, S::Closed}, {S::Future, S::Closed}, {S::Closed, S::Future}};

inline std::set<Transition> legal_set(const Shape& sh, const std::vector<S>& s) {
  std::set<Transition> out;
  for (int v = 0; v < sh.size(); ++v)
    for (auto [a, b] : kMoves)
      if (legal(sh, s, v, a, b)) out.insert({static_cast<ptss::VertexId>(v), a, b});
  return out;
}

struct Step {
  std::vector<S> next;
  int weight;
};

// Reduced relation rebuilt from the full one: keep F->O and O->C, keep
// F->C / C->F only under an Open parent and then push the move down the
// whole subtree.
inline std::vector<Step> reduced(const Shape& sh, const std::vector<S>& s) {
  std::vector<Step> out;
  for (const Transition& t : legal_set(sh, s)) {
    const int v = static_cast<int>(t.vertex);
    std::vector<S> n = s;
    n[v] = t.to;
    int w = 1;
    if (t.to == S::Closed && t.from == S::Future) {
      if (sh.parent[v] < 0 || s[sh.parent[v]] != S::Open) continue;
    } else if (t.from == S::Closed) {
      if (sh.parent[v] < 0 || s[sh.parent[v]] != S::Open) continue;
    }
    if (t.from == S::Future && t.to == S::Closed) {
      for (int d : sh.descendants(v))
        if (n[d] == S::Future) n[d] = S::Closed, ++w;
    } else if (t.from == S::Closed && t.to == S::Future) {
      for (int d : sh.descendants(v))
        if (n[d] == S::Closed) n[d] = S::Future, ++w;
    }
    out.push_back({std::move(n), w});
  }
  return out;
}

// Shortest transition count from all-F to all-C over `reduced`, or -1.
inline long shortest_run(const ProcessTree& t, std::size_t cap = 2'000'000) {
  const Shape sh(t);
  using Key = std::vector<S>;
  std::map<Key, long> dist;
  using Item = std::pair<long, Key>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const Key start(sh.size(), S::Future), goal(sh.size(), S::Closed);
  dist[start] = 0;
  pq.push({0, start});
  while (!pq.empty()) {
    auto [d, k] = pq.top();
    pq.pop();
    if (d != dist[k]) continue;
    if (k == goal) return d;
    for (Step& st : reduced(sh, k)) {
      auto it = dist.find(st.next);
      if (it == dist.end() || it->second > d + st.weight) {
        dist[st.next] = d + st.weight;
        pq.push({d + st.weight, std::move(st.next)});
      }
    }
    if (dist.size() > cap) return -1;
  }
  return -1;
}

}  // namespace oracle
