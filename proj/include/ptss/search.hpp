#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <string_view>

#include "ptss/state_space.hpp"
#include "ptss/tree.hpp"

namespace ptss {

enum class Strategy { UD, BD, BDP };

std::string_view strategy_name(Strategy s) noexcept;
/// Accepts "ud", "bd", "bdp" (case-insensitive).
std::optional<Strategy> parse_strategy(std::string_view text);

struct SearchOptions {
  /// Maximum number of stored states, summed over both directions.
  std::size_t state_cap = 1'000'000;
  /// No limit when empty.
  std::optional<std::chrono::steady_clock::duration> timeout;
};

struct SearchOutcome {
  /// Valid on the forward tree: replays F to C.
  Run run;
  std::size_t run_length = 0;
  /// Distinct states popped for expansion, summed over directions.
  std::size_t expanded_states = 0;
  std::size_t forward_expanded = 0;
  std::size_t backward_expanded = 0;
  std::chrono::nanoseconds wall_time{0};
};

/// Shortest run over the reduced successor relation, costing each
/// transition 1 (a fast-forwarded fragment costs its length). Ties resolve
/// by successor order. Throws CapExceeded or Timeout.
SearchOutcome search_ud(const ProcessTree& tree, const SearchOptions& options = {});

/// Layer-alternating bidirectional search: forward on the tree, backward on
/// its inverse, both from F, meeting when one side's state is the inverse
/// of a state stored by the other side.
SearchOutcome search_bd(const ProcessTree& tree, const SearchOptions& options = {});

/// As search_bd with one thread per direction.
SearchOutcome search_bdp(const ProcessTree& tree, const SearchOptions& options = {});

SearchOutcome search(const ProcessTree& tree, Strategy strategy,
                     const SearchOptions& options = {});

/// sigma . backward^dagger, after checking that `forward` replays the tree
/// from F to some s and `backward` replays the inverse tree from F to s^-1.
/// Throws IllegalTransition for a non-replayable part and Error on a
/// meet-state mismatch.
Run combine_direct(const ProcessTree& tree, const Run& forward, const Run& backward);

}  // namespace ptss
