#include "ptss/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ptss/error.hpp"

namespace ptss {

namespace {

double to_ms(std::chrono::nanoseconds ns) { return static_cast<double>(ns.count()) / 1e6; }

// Runs one strategy `repetitions` times; all repetitions must agree on the
// counted quantities.
StrategyMetrics measure(const ProcessTree& tree, Strategy strategy, const BenchOptions& o,
                        std::optional<std::string>& flag) {
  StrategyMetrics m;
  std::vector<double> times;
  const unsigned reps = std::max(1u, o.repetitions);
  for (unsigned r = 0; r < reps; ++r) {
    SearchOutcome out = search(tree, strategy, o.search);
    times.push_back(to_ms(out.wall_time));
    if (r == 0) {
      m.expanded_states = out.expanded_states;
      m.run_length = out.run_length;
      if (o.validate_runs) {
        try {
          if (!replay(tree, initial_state(tree), out.run).uniform(VertexState::Closed))
            flag = std::string(strategy_name(strategy)) + " run does not reach the final state";
        } catch (const IllegalTransition& e) {
          flag = std::string(strategy_name(strategy)) + " run is not replayable: " + e.what();
        }
      }
    }
  }
  m.ms = quantile(times, 0.5);
  return m;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error("invalid value '" + value + "' for key '" + key + "'");
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

double BenchRecord::memory_reduction() const {
  return static_cast<double>(ud.expanded_states) / static_cast<double>(bd.expanded_states);
}
double BenchRecord::time_reduction() const { return ud.ms / bd.ms; }
double BenchRecord::bdp_speedup() const { return bd.ms / bdp.ms; }

std::vector<BenchRecord> run_benchmark(const std::vector<CorpusEntry>& corpus,
                                       const BenchOptions& options) {
  if (corpus.empty()) throw Error("benchmark corpus is empty");
  std::vector<BenchRecord> records;
  records.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const CorpusEntry& entry = corpus[i];
    BenchRecord r;
    r.tree_id = i;
    r.n_activities = entry.tree.activity_count();
    r.distribution = entry.distribution;
    try {
      r.ud = measure(entry.tree, Strategy::UD, options, r.flag);
      r.bd = measure(entry.tree, Strategy::BD, options, r.flag);
      r.bdp = measure(entry.tree, Strategy::BDP, options, r.flag);
      if (!r.flag && (r.ud.run_length != r.bd.run_length || r.bd.run_length != r.bdp.run_length))
        r.flag = "run length mismatch: ud=" + std::to_string(r.ud.run_length) +
                 " bd=" + std::to_string(r.bd.run_length) +
                 " bdp=" + std::to_string(r.bdp.run_length);
    } catch (const CapExceeded& e) {
      r.flag = e.what();
    } catch (const Timeout& e) {
      r.flag = e.what();
    }
    records.push_back(std::move(r));
    if (options.progress) options.progress(i + 1, corpus.size());
  }
  return records;
}

void write_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kCsvHeader << '\n';
  for (const BenchRecord& r : records) {
    if (r.flag) continue;
    out << r.tree_id << ',' << r.n_activities;
    for (std::size_t i = 0; i < 4; ++i)
      out << ',' << (r.distribution ? fixed(r.distribution->p[i], 6) : std::string());
    out << ',' << r.ud.expanded_states << ',' << fixed(r.ud.ms, 4) << ',' << r.bd.expanded_states
        << ',' << fixed(r.bd.ms, 4) << ',' << r.bdp.expanded_states << ',' << fixed(r.bdp.ms, 4)
        << ',' << r.ud.run_length << '\n';
  }
}

void write_skip_report(std::ostream& out, const std::vector<BenchRecord>& records) {
  for (const BenchRecord& r : records)
    if (r.flag) out << r.tree_id << ',' << *r.flag << '\n';
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error("quantile of empty data");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("spearman needs two equal-length samples");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

Summary aggregate(const std::vector<BenchRecord>& records) {
  Summary s;
  std::vector<const BenchRecord*> ok;
  for (const BenchRecord& r : records) {
    if (r.flag)
      ++s.flagged;
    else
      ok.push_back(&r);
  }
  if (ok.empty()) throw Error("no unflagged benchmark records to aggregate");
  s.records = ok.size();

  std::vector<double> memory, time;
  for (const BenchRecord* r : ok) {
    memory.push_back(r->memory_reduction());
    time.push_back(r->time_reduction());
  }
  s.memory_reduction = {quantile(memory, 0.25), quantile(memory, 0.5), quantile(memory, 0.75)};
  s.time_reduction = {quantile(time, 0.25), quantile(time, 0.5), quantile(time, 0.75)};

  for (std::size_t op = 0; op < 4; ++op) {
    std::array<std::vector<double>, 5> buckets;
    for (const BenchRecord* r : ok) {
      if (!r->distribution) continue;
      const double p = r->distribution->p[op];
      std::size_t best = 0;
      for (std::size_t l = 1; l < kOperatorLevels.size(); ++l)
        if (std::abs(p - kOperatorLevels[l]) < std::abs(p - kOperatorLevels[best])) best = l;
      buckets[best].push_back(r->memory_reduction());
    }
    for (std::size_t l = 0; l < 5; ++l) {
      LevelBucket& b = s.memory_by_level[op][l];
      b.level = kOperatorLevels[l];
      b.count = buckets[l].size();
      if (b.count == 0) continue;
      b.mean = mean(buckets[l]);
      if (b.count > 1) {
        double ss = 0;
        for (double v : buckets[l]) ss += (v - b.mean) * (v - b.mean);
        b.std_error = std::sqrt(ss / static_cast<double>(b.count - 1)) /
                      std::sqrt(static_cast<double>(b.count));
      }
    }
  }

  std::map<int, std::vector<double>> by_magnitude;
  for (const BenchRecord* r : ok) {
    const int e = static_cast<int>(std::floor(std::log10(static_cast<double>(r->bd.expanded_states))));
    by_magnitude[e].push_back(r->bdp_speedup());
  }
  for (auto& [e, v] : by_magnitude) s.bdp_speedup.push_back({e, v.size(), mean(v)});
  return s;
}

std::string format_summary(const Summary& s) {
  static constexpr const char* kNames[4] = {"sequence", "choice", "parallel", "loop"};
  std::ostringstream out;
  out << "records " << s.records << ", flagged " << s.flagged << '\n';
  auto q = [&](const char* name, const Quartiles& v) {
    out << name << " reduction: q1 " << fixed(v.q1, 3) << ", median " << fixed(v.median, 3)
        << ", q3 " << fixed(v.q3, 3) << '\n';
  };
  q("memory", s.memory_reduction);
  q("time", s.time_reduction);
  for (std::size_t op = 0; op < 4; ++op) {
    out << "memory reduction by " << kNames[op] << " level:";
    for (const LevelBucket& b : s.memory_by_level[op]) {
      out << "  " << fixed(b.level, 1) << ": ";
      if (b.count == 0)
        out << "n/a";
      else
        out << fixed(b.mean, 3) << " +- " << fixed(b.std_error, 3) << " (n=" << b.count << ')';
    }
    out << '\n';
  }
  out << "bdp speedup by magnitude of bd states:";
  for (const MagnitudeBucket& b : s.bdp_speedup)
    out << "  1e" << b.exponent << ": " << fixed(b.mean_speedup, 3) << " (n=" << b.count << ')';
  out << '\n';
  return out.str();
}

void apply_config(std::istream& in, RunConfig& config) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "seed") {
      config.gen.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "count") {
      config.count = parse_number<std::size_t>(key, value);
    } else if (key == "min_act") {
      config.gen.min_activities = parse_number<unsigned>(key, value);
    } else if (key == "max_act") {
      config.gen.max_activities = parse_number<unsigned>(key, value);
    } else if (key == "tau") {
      config.gen.tau_probability = parse_number<double>(key, value);
    } else if (key == "min_branch") {
      config.gen.min_branching = parse_number<unsigned>(key, value);
    } else if (key == "max_branch") {
      config.gen.max_branching = parse_number<unsigned>(key, value);
    } else if (key == "state_cap") {
      config.search.state_cap = parse_number<std::size_t>(key, value);
    } else if (key == "timeout_ms") {
      config.search.timeout = std::chrono::milliseconds(parse_number<std::int64_t>(key, value));
    } else if (key == "repetitions") {
      config.repetitions = parse_number<unsigned>(key, value);
    } else {
      throw Error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
}

}  // namespace ptss
