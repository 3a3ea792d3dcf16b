#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ptss/generator.hpp"
#include "ptss/search.hpp"

namespace ptss {

struct StrategyMetrics {
  std::size_t expanded_states = 0;
  /// Median wall time over the repetitions, in milliseconds.
  double ms = 0;
  std::size_t run_length = 0;
};

struct BenchRecord {
  std::size_t tree_id = 0;
  std::size_t n_activities = 0;
  std::optional<OperatorDistribution> distribution;
  StrategyMetrics ud, bd, bdp;
  /// Set when the tree hit the cap or timeout, or the strategies disagree.
  std::optional<std::string> flag;

  double memory_reduction() const;
  double time_reduction() const;
  double bdp_speedup() const;
};

struct BenchOptions {
  SearchOptions search;
  unsigned repetitions = 3;
  /// Replay every returned run and flag any that does not reach C.
  bool validate_runs = true;
  /// Called after each tree with (finished, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Runs UD, BD and BDP on every tree, sequentially. Throws Error on an
/// empty corpus.
std::vector<BenchRecord> run_benchmark(const std::vector<CorpusEntry>& corpus,
                                       const BenchOptions& options = {});

/// Header plus one row per unflagged record.
void write_csv(std::ostream& out, const std::vector<BenchRecord>& records);
inline constexpr const char* kCsvHeader =
    "tree_id,n_activities,p_seq,p_choice,p_par,p_loop,ud_states,ud_ms,bd_states,bd_ms,"
    "bdp_states,bdp_ms,run_len";

/// One line per flagged record: `tree_id,reason`.
void write_skip_report(std::ostream& out, const std::vector<BenchRecord>& records);

struct Quartiles {
  double q1 = 0, median = 0, q3 = 0;
};

struct LevelBucket {
  double level = 0;
  std::size_t count = 0;
  double mean = 0;
  double std_error = 0;
};

struct MagnitudeBucket {
  /// floor(log10(BD expanded states))
  int exponent = 0;
  std::size_t count = 0;
  double mean_speedup = 0;
};

inline constexpr std::array<double, 5> kOperatorLevels = {0.0, 0.2, 0.4, 0.6, 0.8};

struct Summary {
  std::size_t records = 0;
  std::size_t flagged = 0;
  Quartiles memory_reduction;
  Quartiles time_reduction;
  /// Indexed like kGeneratedOperators, then like kOperatorLevels.
  std::array<std::array<LevelBucket, 5>, 4> memory_by_level{};
  std::vector<MagnitudeBucket> bdp_speedup;
};

/// Throws Error when no unflagged record exists.
Summary aggregate(const std::vector<BenchRecord>& records);

std::string format_summary(const Summary& summary);

/// Linear-interpolated quantile of unsorted data, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

/// Settings read from a key=value file.
struct RunConfig {
  GenConfig gen;
  std::size_t count = 1000;
  SearchOptions search;
  unsigned repetitions = 3;
};

/// Keys: seed, count, min_act, max_act, tau, min_branch, max_branch,
/// state_cap, timeout_ms, repetitions. `#` starts a comment. Unknown keys
/// and malformed values throw Error.
void apply_config(std::istream& in, RunConfig& config);

}  // namespace ptss
