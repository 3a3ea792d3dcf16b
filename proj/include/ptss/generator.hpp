#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ptss/tree.hpp"

namespace ptss {

using Rng = std::mt19937_64;

/// Order of the generated operators in every probability vector.
inline constexpr std::array<Operator, 4> kGeneratedOperators = {
    Operator::Sequence, Operator::Choice, Operator::Parallel, Operator::Loop};

struct GenConfig {
  std::uint64_t seed = 0;
  /// Inclusive range for the number of activity leaves.
  unsigned min_activities = 5;
  unsigned max_activities = 15;
  /// Dirichlet concentration over {Sequence, Choice, Parallel, Loop}.
  std::array<double, 4> operator_alpha = {1.0, 1.0, 1.0, 1.0};
  double tau_probability = 0.1;
  unsigned min_branching = 2;
  unsigned max_branching = 4;

  /// Throws Error on an unusable configuration.
  void validate() const;
};

struct OperatorDistribution {
  /// Probabilities of Sequence, Choice, Parallel, Loop.
  std::array<double, 4> p = {0.25, 0.25, 0.25, 0.25};

  double of(Operator op) const;
  Operator draw(Rng& rng) const;
};

/// One Dirichlet(alpha) draw via normalised Gamma(alpha_i, 1) variates.
OperatorDistribution sample_distribution(Rng& rng,
                                         const std::array<double, 4>& alpha = {1, 1, 1, 1});

/// Random tree with an activity count drawn from the configured range.
/// Leaves are named a1, a2, ... in pre-order.
ProcessTree generate_tree(Rng& rng, const GenConfig& config,
                          const OperatorDistribution& distribution);

struct CorpusEntry {
  ProcessTree tree;
  /// Known for generated corpora; absent for hand-written trees.
  std::optional<OperatorDistribution> distribution;
};

/// `count` pairwise distinct trees (by canonical text), each with its own
/// sampled distribution. Fully determined by `config`.
std::vector<CorpusEntry> generate_corpus(const GenConfig& config, std::size_t count);

/// `.ptt` text: header comments with seed and configuration, then per tree
/// a `# p_seq=... p_choice=... p_par=... p_loop=...` comment and the tree.
void write_corpus(std::ostream& out, const GenConfig& config,
                  const std::vector<CorpusEntry>& corpus);

/// Reads a `.ptt` stream; a probability comment applies to the next tree.
std::vector<CorpusEntry> read_corpus(std::istream& in);

}  // namespace ptss
