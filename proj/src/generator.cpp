#include "ptss/generator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "ptss/error.hpp"

namespace ptss {

namespace {

constexpr const char* kProbabilityKeys[4] = {"p_seq", "p_choice", "p_par", "p_loop"};
constexpr std::size_t kMaxRedraws = 100'000;

struct Builder {
  Rng& rng;
  const GenConfig& config;
  const OperatorDistribution& dist;
  std::vector<bool> tau_slots;  // leaf slots left to right
  std::size_t next_slot = 0;
  unsigned next_name = 1;

  TreeNode build(std::size_t leaves) {
    if (leaves == 1) {
      if (tau_slots[next_slot++]) return TreeNode::tau();
      return TreeNode::leaf("a" + std::to_string(next_name++));
    }
    const Operator op = dist.draw(rng);
    std::size_t k = 2;
    if (op != Operator::Loop) {
      const std::size_t hi = std::min<std::size_t>(config.max_branching, leaves);
      const std::size_t lo = std::min<std::size_t>(config.min_branching, hi);
      k = std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    }
    std::vector<TreeNode> children;
    children.reserve(k);
    for (std::size_t part : split(leaves, k)) children.push_back(build(part));
    return TreeNode::op(op, std::move(children));
  }

  // Random composition of n into k positive parts.
  std::vector<std::size_t> split(std::size_t n, std::size_t k) {
    std::vector<std::size_t> cuts(n - 1);
    for (std::size_t i = 0; i < cuts.size(); ++i) cuts[i] = i + 1;
    std::shuffle(cuts.begin(), cuts.end(), rng);
    cuts.resize(k - 1);
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::size_t> parts;
    std::size_t prev = 0;
    for (std::size_t c : cuts) {
      parts.push_back(c - prev);
      prev = c;
    }
    parts.push_back(n - prev);
    return parts;
  }
};

// shortest text that reads back to the same double
std::string format_probability(double p) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return std::string(buf, end);
}

std::optional<OperatorDistribution> parse_probability_comment(const std::string& line) {
  OperatorDistribution d;
  bool seen[4] = {false, false, false, false};
  std::istringstream in(line.substr(line.find('#') + 1));
  std::string token;
  while (in >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = token.substr(0, eq);
    for (int i = 0; i < 4; ++i) {
      if (key != kProbabilityKeys[i]) continue;
      try {
        std::size_t used = 0;
        d.p[i] = std::stod(token.substr(eq + 1), &used);
        if (used != token.size() - eq - 1) throw Error("");
      } catch (const std::exception&) {
        throw Error("malformed probability '" + token + "'");
      }
      seen[i] = true;
    }
  }
  for (bool s : seen)
    if (!s) return std::nullopt;
  return d;
}

}  // namespace

void GenConfig::validate() const {
  if (min_activities < 1) throw Error("activity range must start at 1 or more");
  if (min_activities > max_activities) throw Error("activity range is empty");
  for (double a : operator_alpha)
    if (!(a > 0) || !std::isfinite(a)) throw Error("Dirichlet concentrations must be positive");
  if (!(tau_probability >= 0 && tau_probability < 1))
    throw Error("tau probability must lie in [0, 1)");
  if (min_branching < 2 || min_branching > max_branching)
    throw Error("branching range must satisfy 2 <= min <= max");
}

double OperatorDistribution::of(Operator op) const {
  for (std::size_t i = 0; i < kGeneratedOperators.size(); ++i)
    if (kGeneratedOperators[i] == op) return p[i];
  return 0.0;
}

Operator OperatorDistribution::draw(Rng& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    acc += p[i];
    if (u < acc) return kGeneratedOperators[i];
  }
  return kGeneratedOperators[3];
}

OperatorDistribution sample_distribution(Rng& rng, const std::array<double, 4>& alpha) {
  OperatorDistribution d;
  double total = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    d.p[i] = std::gamma_distribution<double>(alpha[i], 1.0)(rng);
    total += d.p[i];
  }
  if (!(total > 0)) return OperatorDistribution{};
  for (double& x : d.p) x /= total;
  return d;
}

ProcessTree generate_tree(Rng& rng, const GenConfig& config,
                          const OperatorDistribution& distribution) {
  config.validate();
  const unsigned activities = std::uniform_int_distribution<unsigned>(
      config.min_activities, config.max_activities)(rng);
  std::bernoulli_distribution tau(config.tau_probability);
  Builder b{rng, config, distribution, {}};
  for (unsigned placed = 0; placed < activities;) {
    const bool is_tau = tau(rng);
    b.tau_slots.push_back(is_tau);
    if (!is_tau) ++placed;
  }
  return ProcessTree::from_nested(b.build(b.tau_slots.size()));
}

std::vector<CorpusEntry> generate_corpus(const GenConfig& config, std::size_t count) {
  config.validate();
  Rng rng(config.seed);
  std::vector<CorpusEntry> corpus;
  std::unordered_set<std::string> seen;
  std::size_t misses = 0;
  while (corpus.size() < count) {
    OperatorDistribution dist = sample_distribution(rng, config.operator_alpha);
    ProcessTree tree = generate_tree(rng, config, dist);
    if (!seen.insert(format_tree(tree)).second) {
      if (++misses > kMaxRedraws)
        throw Error("could not generate " + std::to_string(count) +
                    " distinct trees with this configuration");
      continue;
    }
    misses = 0;
    corpus.push_back({std::move(tree), dist});
  }
  return corpus;
}

void write_corpus(std::ostream& out, const GenConfig& config,
                  const std::vector<CorpusEntry>& corpus) {
  out << "# ptss corpus\n";
  out << "# seed=" << config.seed << " count=" << corpus.size()
      << " min_act=" << config.min_activities << " max_act=" << config.max_activities
      << " tau=" << format_probability(config.tau_probability)
      << " branching=" << config.min_branching << '-' << config.max_branching << '\n';
  out << "# alpha=";
  for (std::size_t i = 0; i < 4; ++i)
    out << (i ? "," : "") << format_probability(config.operator_alpha[i]);
  out << '\n';
  for (const CorpusEntry& e : corpus) {
    if (e.distribution) {
      out << '#';
      for (std::size_t i = 0; i < 4; ++i)
        out << ' ' << kProbabilityKeys[i] << '=' << format_probability(e.distribution->p[i]);
      out << '\n';
    }
    out << format_tree(e.tree) << '\n';
  }
}

std::vector<CorpusEntry> read_corpus(std::istream& in) {
  std::vector<CorpusEntry> corpus;
  std::optional<OperatorDistribution> pending;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      if (auto d = parse_probability_comment(line)) pending = d;
      continue;
    }
    try {
      corpus.push_back({parse_tree(line), pending});
    } catch (const ParseError& e) {
      throw ParseError(e.kind(), e.position(),
                       "line " + std::to_string(line_no) + ": " + e.what());
    }
    pending.reset();
  }
  return corpus;
}

}  // namespace ptss
