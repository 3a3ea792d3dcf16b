#pragma once

#include <set>
#include <string>
#include <vector>

#include "ptss/generator.hpp"
#include "ptss/tree.hpp"

namespace support {

// Distinct generated trees with at most `max_vertices` vertices, each with
// a fresh operator distribution. Deterministic in the seed.
inline std::vector<ptss::ProcessTree> small_trees(std::uint64_t seed, std::size_t count,
                                                  unsigned min_act, unsigned max_act,
                                                  std::size_t max_vertices = 1000) {
  ptss::GenConfig cfg;
  cfg.seed = seed;
  cfg.min_activities = min_act;
  cfg.max_activities = max_act;
  ptss::Rng rng(seed);
  std::vector<ptss::ProcessTree> out;
  std::set<std::string> seen;
  while (out.size() < count) {
    const auto dist = ptss::sample_distribution(rng);
    auto tree = ptss::generate_tree(rng, cfg, dist);
    if (tree.size() > max_vertices) continue;
    if (!seen.insert(ptss::format_tree(tree)).second) continue;
    out.push_back(std::move(tree));
  }
  return out;
}

}  // namespace support
