#include "ptss/search.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <deque>
#include <exception>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <thread>

#include "ptss/error.hpp"
#include "ptss/packed_state.hpp"

namespace ptss {

namespace {

using Clock = std::chrono::steady_clock;
using Id = StateStore::Id;
constexpr std::size_t kNoDepth = std::numeric_limits<std::size_t>::max();

struct Limits {
  std::size_t cap;
  std::optional<Clock::time_point> deadline;
  std::atomic<std::size_t> stored{0};

  explicit Limits(const SearchOptions& o) : cap(o.state_cap) {
    if (o.timeout) deadline = Clock::now() + *o.timeout;
  }
};

// One search direction: a bucketed priority queue over transition depth
// (weights are small positive integers) with an interning explored store.
class Frontier {
 public:
  Frontier(const ProcessTree& tree, const StateCodec& codec, Limits& limits)
      : tree_(tree),
        codec_(codec),
        limits_(limits),
        expander_(tree),
        store_(codec.words()),
        state_buf_(tree.size()),
        key_buf_(codec.words()) {}

  void seed(const TreeState& s) {
    codec_.pack(s.values(), key_buf_);
    relax(StateStore::kNone, 0);
  }

  /// Depth of the next live entry, or kNoDepth when the queue is empty.
  std::size_t top() {
    while (top_ < buckets_.size()) {
      auto& bucket = buckets_[top_];
      while (head_ < bucket.size() && !live(bucket[head_])) ++head_;
      if (head_ < bucket.size()) return top_;
      std::vector<Id>().swap(bucket);
      ++top_;
      head_ = 0;
    }
    return kNoDepth;
  }

  /// Precondition: top() != kNoDepth.
  Id pop() {
    top();
    return buckets_[top_][head_++];
  }

  void expand(Id id) {
    expanded_[id] = 1;
    ++expanded_count_;
    if (limits_.deadline && (expanded_count_ & 255) == 0 && Clock::now() > *limits_.deadline)
      throw Timeout();
    codec_.unpack(store_.key(id), state_buf_);
    expander_.expand(state_buf_, [&](std::span<const VertexState> next, const Transition&,
                                     std::uint32_t weight) {
      codec_.pack(next, key_buf_);
      relax(id, depth_[id] + weight);
    });
  }

  bool is_key(Id id, std::span<const std::uint64_t> key) const {
    auto k = store_.key(id);
    return std::equal(k.begin(), k.end(), key.begin());
  }

  std::vector<TreeState> path_to(Id id) const {
    std::vector<TreeState> states;
    for (Id cur = id; cur != StateStore::kNone; cur = parent_[cur])
      states.push_back(codec_.unpack(store_.key(cur)));
    std::reverse(states.begin(), states.end());
    return states;
  }

  Run run_to(Id id) const {
    auto states = path_to(id);
    Run run;
    for (std::size_t i = 1; i < states.size(); ++i) {
      Run part = fragment_between(states[i - 1], states[i]);
      run.insert(run.end(), part.begin(), part.end());
    }
    return run;
  }

  const StateStore& store() const { return store_; }
  std::size_t depth(Id id) const { return depth_[id]; }
  std::size_t expanded_count() const { return expanded_count_; }

 private:
  bool live(Id id) const { return !expanded_[id] && depth_[id] == top_; }

  void relax(Id from, std::size_t d) {
    auto [id, inserted] = store_.insert(key_buf_);
    if (inserted) {
      if (limits_.stored.fetch_add(1, std::memory_order_relaxed) + 1 > limits_.cap)
        throw CapExceeded(limits_.cap);
      depth_.push_back(d);
      parent_.push_back(from);
      expanded_.push_back(0);
    } else if (expanded_[id] || d >= depth_[id]) {
      return;
    } else {
      depth_[id] = d;
      parent_[id] = from;
    }
    if (d >= buckets_.size()) buckets_.resize(d + 1);
    buckets_[d].push_back(id);
  }

  const ProcessTree& tree_;
  const StateCodec& codec_;
  Limits& limits_;
  ReducedExpander expander_;
  StateStore store_;
  std::vector<std::size_t> depth_;
  std::vector<Id> parent_;
  std::vector<std::uint8_t> expanded_;
  std::deque<std::vector<Id>> buckets_;
  std::size_t top_ = 0;
  std::size_t head_ = 0;
  std::size_t expanded_count_ = 0;
  std::vector<VertexState> state_buf_;
  std::vector<std::uint64_t> key_buf_;
};

struct Meet {
  std::size_t length = kNoDepth;
  Id forward = StateStore::kNone;
  Id backward = StateStore::kNone;

  void offer(std::size_t len, Id f, Id b) {
    if (len < length) *this = {len, f, b};
  }
};

// Looks up the inverse of `self`'s state `id` in `other`. `self_is_forward`
// orients the resulting meet.
void probe(const StateCodec& codec, const Frontier& self, Id id, const Frontier& other,
           bool self_is_forward, std::vector<std::uint64_t>& buf, Meet& meet) {
  codec.invert(self.store().key(id), buf);
  Id match = other.store().find(buf);
  if (match == StateStore::kNone) return;
  const std::size_t len = self.depth(id) + other.depth(match);
  if (self_is_forward)
    meet.offer(len, id, match);
  else
    meet.offer(len, match, id);
}

SearchOutcome finish_bidirectional(const ProcessTree& tree, const Frontier& fwd,
                                   const Frontier& bwd, const Meet& meet,
                                   Clock::time_point start) {
  if (meet.length == kNoDepth) throw Error("no run from the initial to the final state");
  SearchOutcome out;
  out.run = combine_direct(tree, fwd.run_to(meet.forward), bwd.run_to(meet.backward));
  out.run_length = out.run.size();
  out.forward_expanded = fwd.expanded_count();
  out.backward_expanded = bwd.expanded_count();
  out.expanded_states = out.forward_expanded + out.backward_expanded;
  out.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return out;
}

bool saturated_sum_reaches(std::size_t a, std::size_t b, std::size_t mu) {
  if (a == kNoDepth || b == kNoDepth) return true;
  return a + b >= mu;
}

}  // namespace

std::string_view strategy_name(Strategy s) noexcept {
  switch (s) {
    case Strategy::UD: return "ud";
    case Strategy::BD: return "bd";
    case Strategy::BDP: return "bdp";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view text) {
  std::string lower;
  for (char c : text) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "ud") return Strategy::UD;
  if (lower == "bd") return Strategy::BD;
  if (lower == "bdp") return Strategy::BDP;
  return std::nullopt;
}

SearchOutcome search_ud(const ProcessTree& tree, const SearchOptions& options) {
  const auto start = Clock::now();
  Limits limits(options);
  StateCodec codec(tree.size());
  Frontier f(tree, codec, limits);
  f.seed(initial_state(tree));
  const auto goal = codec.pack(final_state(tree));

  while (f.top() != kNoDepth) {
    Id id = f.pop();
    if (f.is_key(id, goal)) {
      SearchOutcome out;
      out.run = f.run_to(id);
      out.run_length = out.run.size();
      out.forward_expanded = f.expanded_count() + 1;  // the goal itself is popped
      out.expanded_states = out.forward_expanded;
      out.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
      return out;
    }
    f.expand(id);
  }
  throw Error("no run from the initial to the final state");
}

SearchOutcome search_bd(const ProcessTree& tree, const SearchOptions& options) {
  const auto start = Clock::now();
  Limits limits(options);
  const ProcessTree inverse = invert(tree);
  StateCodec codec(tree.size());
  Frontier fwd(tree, codec, limits);
  Frontier bwd(inverse, codec, limits);
  fwd.seed(initial_state(tree));
  bwd.seed(initial_state(inverse));

  // Directions alternate layer by layer. The stopping rule is checked before
  // every expansion: all states shallower than a direction's top have been
  // expanded and probed, which is all the optimality argument needs.
  Meet meet;
  std::vector<std::uint64_t> buf(codec.words());
  for (bool forward_turn = true;; forward_turn = !forward_turn) {
    Frontier& self = forward_turn ? fwd : bwd;
    Frontier& other = forward_turn ? bwd : fwd;
    const std::size_t d = self.top();
    while (self.top() == d) {
      if (saturated_sum_reaches(fwd.top(), bwd.top(), meet.length))
        return finish_bidirectional(tree, fwd, bwd, meet, start);
      Id id = self.pop();
      self.expand(id);
      probe(codec, self, id, other, forward_turn, buf, meet);
    }
  }
}

SearchOutcome search_bdp(const ProcessTree& tree, const SearchOptions& options) {
  const auto start = Clock::now();
  Limits limits(options);
  const ProcessTree inverse = invert(tree);
  StateCodec codec(tree.size());
  Frontier fwd(tree, codec, limits);
  Frontier bwd(inverse, codec, limits);
  fwd.seed(initial_state(tree));
  bwd.seed(initial_state(inverse));

  // Each worker owns its frontier and writes its store under an exclusive
  // lock; probes take the opposite store's lock shared. A worker inserts a
  // state's successors before probing it, so for any edge between a state
  // expanded forward and one expanded backward, whichever probe runs second
  // sees the other's entry. Tops are published only once every shallower
  // state has been expanded and probed, which keeps the stopping rule of
  // search_bd valid. Workers advance layer counts in lock step.
  std::shared_mutex store_lock[2];
  std::atomic<std::size_t> published_top[2] = {0, 0};
  std::atomic<std::size_t> layers[2] = {0, 0};
  std::atomic<std::size_t> best{kNoDepth};
  std::atomic<bool> stop{false};
  Meet local[2];
  std::exception_ptr errors[2];

  auto halt = [&](int side) {
    stop = true;
    layers[side].fetch_add(1);
    layers[side].notify_all();
  };

  auto worker = [&](int side) {
    Frontier& self = side == 0 ? fwd : bwd;
    Frontier& other = side == 0 ? bwd : fwd;
    std::vector<std::uint64_t> buf(codec.words());
    try {
      while (!stop) {
        const std::size_t mine = layers[side].load();
        for (std::size_t seen; !stop && (seen = layers[1 - side].load()) < mine;)
          layers[1 - side].wait(seen);
        const std::size_t d = self.top();
        published_top[side] = d;
        while (!stop && self.top() == d) {
          if (saturated_sum_reaches(published_top[0], published_top[1], best)) {
            halt(side);
            return;
          }
          Id id = self.pop();
          {
            std::unique_lock lock(store_lock[side]);
            self.expand(id);
          }
          {
            std::shared_lock lock(store_lock[1 - side]);
            probe(codec, self, id, other, side == 0, buf, local[side]);
          }
          std::size_t cur = best.load();
          while (local[side].length < cur && !best.compare_exchange_weak(cur, local[side].length)) {
          }
        }
        if (d == kNoDepth) {
          halt(side);
          return;
        }
        layers[side].fetch_add(1);
        layers[side].notify_all();
      }
    } catch (...) {
      errors[side] = std::current_exception();
      halt(side);
    }
  };

  {
    std::jthread backward_worker(worker, 1);
    worker(0);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  Meet merged = local[0];
  merged.offer(local[1].length, local[1].forward, local[1].backward);
  return finish_bidirectional(tree, fwd, bwd, merged, start);
}

SearchOutcome search(const ProcessTree& tree, Strategy strategy, const SearchOptions& options) {
  switch (strategy) {
    case Strategy::UD: return search_ud(tree, options);
    case Strategy::BD: return search_bd(tree, options);
    case Strategy::BDP: return search_bdp(tree, options);
  }
  throw Error("unknown strategy");
}

Run combine_direct(const ProcessTree& tree, const Run& forward, const Run& backward) {
  const TreeState meet = replay(tree, initial_state(tree), forward);
  const ProcessTree inverse = invert(tree);
  const TreeState other = replay(inverse, initial_state(inverse), backward);
  if (other != invert_state(meet))
    throw Error("meet-state mismatch: forward run ends in " + meet.to_string() +
                ", backward run ends in " + other.to_string() + " (expected " +
                invert_state(meet).to_string() + ")");
  Run out = forward;
  Run tail = invert_run(backward);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

}  // namespace ptss
