#include <random>
#include <set>

#include "doctest.h"
#include "ptss/packed_state.hpp"

using namespace ptss;

namespace {
TreeState random_state(std::mt19937_64& rng, std::size_t n) {
  TreeState s(n);
  for (std::size_t i = 0; i < n; ++i) s[static_cast<VertexId>(i)] = static_cast<VertexState>(rng() % 3);
  return s;
}
}  // namespace

TEST_CASE("codec round trip and packed inverse") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {1, 2, 31, 32, 33, 63, 64, 65, 100}) {
    const StateCodec codec(n);
    CHECK(codec.words() == (n + 31) / 32);
    for (int i = 0; i < 200; ++i) {
      const TreeState s = random_state(rng, n);
      const auto packed = codec.pack(s);
      REQUIRE(codec.unpack(packed) == s);
      std::vector<std::uint64_t> inv(codec.words());
      codec.invert(packed, inv);
      CHECK(inv == codec.pack(invert_state(s)));
    }
  }
}

TEST_CASE("equal states pack to equal words") {
  const StateCodec codec(40);
  TreeState a(40, VertexState::Closed), b(40, VertexState::Closed);
  CHECK(codec.pack(a) == codec.pack(b));
  b[39] = VertexState::Open;
  CHECK(codec.pack(a) != codec.pack(b));
}

TEST_CASE("store interns keys with dense ids across growth") {
  std::mt19937_64 rng(9);
  const StateCodec codec(50);
  StateStore store(codec.words());
  std::vector<std::vector<std::uint64_t>> keys;
  std::set<std::vector<std::uint64_t>> seen;
  while (keys.size() < 20000) {
    auto k = codec.pack(random_state(rng, 50));
    if (seen.insert(k).second) keys.push_back(k);
  }
  for (std::size_t i = 0; i < keys.size(); ++i) {
    auto [id, inserted] = store.insert(keys[i]);
    REQUIRE(inserted);
    CHECK(id == i);
  }
  CHECK(store.size() == keys.size());
  for (std::size_t i = 0; i < keys.size(); i += 97) {
    CHECK(store.find(keys[i]) == i);
    auto [id, inserted] = store.insert(keys[i]);
    CHECK(!inserted);
    CHECK(id == i);
    CHECK(std::vector<std::uint64_t>(store.key(id).begin(), store.key(id).end()) == keys[i]);
  }
  CHECK(store.find(codec.pack(TreeState(50, VertexState::Open))) == StateStore::kNone);
}
