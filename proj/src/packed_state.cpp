#include "ptss/packed_state.hpp"

#include <algorithm>

#include "ptss/error.hpp"

namespace ptss {

namespace {

constexpr std::uint64_t kLowBits = 0x5555555555555555ull;
constexpr std::uint64_t kHighBits = 0xaaaaaaaaaaaaaaaaull;
constexpr std::size_t kCellsPerWord = 32;

}  // namespace

StateCodec::StateCodec(std::size_t vertices)
    : vertices_(vertices), words_((vertices + kCellsPerWord - 1) / kCellsPerWord) {
  if (vertices == 0) throw Error("cannot encode an empty state");
  const std::size_t used = vertices - (words_ - 1) * kCellsPerWord;
  last_mask_ = used == kCellsPerWord ? ~0ull : (1ull << (2 * used)) - 1;
}

void StateCodec::pack(std::span<const VertexState> state,
                      std::span<std::uint64_t> out) const {
  std::fill(out.begin(), out.end(), 0);
  for (std::size_t v = 0; v < vertices_; ++v)
    out[v / kCellsPerWord] |= static_cast<std::uint64_t>(state[v])
                              << (2 * (v % kCellsPerWord));
}

void StateCodec::unpack(std::span<const std::uint64_t> packed,
                        std::span<VertexState> out) const {
  for (std::size_t v = 0; v < vertices_; ++v)
    out[v] = static_cast<VertexState>((packed[v / kCellsPerWord] >>
                                       (2 * (v % kCellsPerWord))) & 3u);
}

void StateCodec::invert(std::span<const std::uint64_t> packed,
                        std::span<std::uint64_t> out) const {
  for (std::size_t w = 0; w < words_; ++w) {
    const std::uint64_t x = packed[w];
    // Cells whose low bit is clear are F (00) or C (10): flip their high bit.
    std::uint64_t flip = ~((x & kLowBits) << 1) & kHighBits;
    if (w + 1 == words_) flip &= last_mask_;
    out[w] = x ^ flip;
  }
}

std::vector<std::uint64_t> StateCodec::pack(const TreeState& state) const {
  if (state.size() != vertices_) throw Error("state size does not match codec");
  std::vector<std::uint64_t> out(words_);
  pack(state.values(), out);
  return out;
}

TreeState StateCodec::unpack(std::span<const std::uint64_t> packed) const {
  TreeState out(vertices_);
  unpack(packed, out.values());
  return out;
}

StateStore::StateStore(std::size_t words)
    : words_(words), table_(1024, kNone), mask_(1023) {}

std::uint64_t StateStore::hash(std::span<const std::uint64_t> key) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t w : key) {
    h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 29;
  }
  return h;
}

bool StateStore::equal(Id id, std::span<const std::uint64_t> key) const noexcept {
  const std::uint64_t* stored = arena_.data() + static_cast<std::size_t>(id) * words_;
  return std::equal(key.begin(), key.end(), stored);
}

StateStore::Id StateStore::find(std::span<const std::uint64_t> key) const {
  for (std::size_t i = hash(key) & mask_;; i = (i + 1) & mask_) {
    Id id = table_[i];
    if (id == kNone) return kNone;
    if (equal(id, key)) return id;
  }
}

std::pair<StateStore::Id, bool> StateStore::insert(std::span<const std::uint64_t> key) {
  std::size_t i = hash(key) & mask_;
  for (;; i = (i + 1) & mask_) {
    Id id = table_[i];
    if (id == kNone) break;
    if (equal(id, key)) return {id, false};
  }
  if (count_ >= kNone - 1) throw Error("state store is full");
  const auto id = static_cast<Id>(count_++);
  arena_.insert(arena_.end(), key.begin(), key.end());
  table_[i] = id;
  if (2 * count_ > table_.size()) grow();
  return {id, true};
}

void StateStore::grow() {
  std::vector<Id> table(table_.size() * 2, kNone);
  const std::size_t mask = table.size() - 1;
  for (Id id = 0; id < count_; ++id) {
    std::size_t i = hash(key(id)) & mask;
    while (table[i] != kNone) i = (i + 1) & mask;
    table[i] = id;
  }
  table_.swap(table);
  mask_ = mask;
}

}  // namespace ptss
