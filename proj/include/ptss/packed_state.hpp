#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ptss/state_space.hpp"

namespace ptss {

/// Fixed-width 2-bit-per-vertex encoding of a TreeState (F=00, O=01, C=10).
/// Unused trailing cells are always zero, so equal states have equal words.
class StateCodec {
 public:
  explicit StateCodec(std::size_t vertices);

  std::size_t vertices() const noexcept { return vertices_; }
  std::size_t words() const noexcept { return words_; }

  void pack(std::span<const VertexState> state, std::span<std::uint64_t> out) const;
  void unpack(std::span<const std::uint64_t> packed, std::span<VertexState> out) const;
  /// Packed form of invert_state().
  void invert(std::span<const std::uint64_t> packed, std::span<std::uint64_t> out) const;

  std::vector<std::uint64_t> pack(const TreeState& state) const;
  TreeState unpack(std::span<const std::uint64_t> packed) const;

 private:
  std::size_t vertices_;
  std::size_t words_;
  std::uint64_t last_mask_;
};

/// Interning hash set of packed states backed by one contiguous arena.
/// Ids are dense and stable; not safe for concurrent mutation.
class StateStore {
 public:
  using Id = std::uint32_t;
  static constexpr Id kNone = 0xffffffffu;

  explicit StateStore(std::size_t words);

  /// Returns (id, inserted).
  std::pair<Id, bool> insert(std::span<const std::uint64_t> key);
  Id find(std::span<const std::uint64_t> key) const;

  std::span<const std::uint64_t> key(Id id) const {
    return {arena_.data() + static_cast<std::size_t>(id) * words_, words_};
  }
  std::size_t size() const noexcept { return count_; }
  std::size_t words() const noexcept { return words_; }

 private:
  std::uint64_t hash(std::span<const std::uint64_t> key) const noexcept;
  bool equal(Id id, std::span<const std::uint64_t> key) const noexcept;
  void grow();

  std::size_t words_;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> arena_;
  std::vector<Id> table_;
  std::size_t mask_;
};

}  // namespace ptss
