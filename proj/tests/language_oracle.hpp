#pragma once
// Brute-force bounded language over explicit trace sets. Each trace keeps
// every loop budget it can be produced with; slow, only for small trees.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ptss/tree.hpp"

namespace oracle {

using Word = std::vector<std::string>;
using Budget = std::vector<unsigned>;
using Bag = std::set<std::pair<Word, Budget>>;

inline void interleavings(const Word& a, std::size_t i, const Word& b, std::size_t j, Word& acc,
                          std::set<Word>& out) {
  if (i == a.size() && j == b.size()) out.insert(acc);
  if (i < a.size()) {
    acc.push_back(a[i]);
    interleavings(a, i + 1, b, j, acc, out);
    acc.pop_back();
  }
  if (j < b.size()) {
    acc.push_back(b[j]);
    interleavings(a, i, b, j + 1, acc, out);
    acc.pop_back();
  }
}

inline std::set<Word> language(const ptss::ProcessTree& t, unsigned k) {
  std::map<ptss::VertexId, std::size_t> loop_index;
  for (ptss::VertexId v = 0; v < t.size(); ++v)
    if (t.label(v).is_operator(ptss::Operator::Loop)) loop_index.emplace(v, loop_index.size());
  const std::size_t loops = loop_index.size();

  auto join = [&](const Bag& a, const Bag& b, bool mix) {
    Bag out;
    for (const auto& [x, bx] : a)
      for (const auto& [y, by] : b) {
        Budget sum(loops);
        bool ok = true;
        for (std::size_t i = 0; i < loops; ++i) {
          sum[i] = bx[i] + by[i];
          ok = ok && sum[i] <= k;
        }
        if (!ok) continue;
        std::set<Word> words;
        if (mix) {
          Word acc;
          interleavings(x, 0, y, 0, acc, words);
        } else {
          Word w = x;
          w.insert(w.end(), y.begin(), y.end());
          words.insert(w);
        }
        for (const Word& w : words) out.insert({w, sum});
      }
    return out;
  };

  std::function<Bag(ptss::VertexId)> of = [&](ptss::VertexId v) -> Bag {
    const auto& l = t.label(v);
    if (l.is_tau()) return {{Word{}, Budget(loops)}};
    if (l.is_activity()) return {{Word{l.name()}, Budget(loops)}};
    std::vector<Bag> kids;
    for (ptss::VertexId c : t.children(v)) kids.push_back(of(c));
    const Bag unit = {{Word{}, Budget(loops)}};
    Bag out;
    switch (l.op()) {
      case ptss::Operator::Sequence:
        out = unit;
        for (const Bag& b : kids) out = join(out, b, false);
        break;
      case ptss::Operator::ReverseSequence:
        out = unit;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it) out = join(out, *it, false);
        break;
      case ptss::Operator::Choice:
        for (const Bag& b : kids) out.insert(b.begin(), b.end());
        break;
      case ptss::Operator::Parallel:
        out = unit;
        for (const Bag& b : kids) out = join(out, b, true);
        break;
      case ptss::Operator::Loop: {
        Bag round;
        for (auto [w, b] : join(kids[1], kids[0], false)) {
          if (++b[loop_index.at(v)] <= k) round.insert({w, b});
        }
        out = kids[0];
        Bag frontier = kids[0];
        while (!frontier.empty()) {
          Bag next;
          for (const auto& e : join(frontier, round, false))
            if (out.insert(e).second) next.insert(e);
          frontier = next;
        }
        break;
      }
    }
    return out;
  };

  std::set<Word> out;
  for (const auto& [w, b] : of(t.root())) out.insert(w);
  return out;
}

}  // namespace oracle
