// Command-line front end. Talks to the library only through ptss.h.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptss/ptss.h"

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

// Thrown for anything the library rejects; carries the message to print.
struct DomainError {
  std::string message;
};

struct UsageError {
  std::string message;
};

void check(ptss_status st, const std::string& context = {}) {
  if (st == PTSS_OK) return;
  std::string msg = ptss_status_name(st);
  if (*ptss_last_error()) msg += std::string(": ") + ptss_last_error();
  if (!context.empty()) msg = context + ": " + msg;
  throw DomainError{msg};
}

struct StringDeleter {
  void operator()(char* s) const { ptss_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct TreeDeleter {
  void operator()(ptss_tree* t) const { ptss_tree_free(t); }
};
using Tree = std::unique_ptr<ptss_tree, TreeDeleter>;

struct OutcomeDeleter {
  void operator()(ptss_outcome* o) const { ptss_outcome_free(o); }
};
using Outcome = std::unique_ptr<ptss_outcome, OutcomeDeleter>;

std::string take(char* s) { return OwnedString(s).get(); }

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError{"cannot open " + path};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw DomainError{"cannot write " + path};
}

// Where trees come from: a .ptt file, or a single tree given with -e.
struct TreeInput {
  std::string file;
  std::string expr;

  void attach(CLI::App* cmd) {
    auto* f = cmd->add_option("file", file, ".ptt file, one tree per line ('-' for stdin)");
    auto* e = cmd->add_option("-e,--expr", expr, "tree given inline");
    f->excludes(e);
  }

  std::vector<Tree> load() const {
    std::vector<Tree> trees;
    if (!expr.empty()) {
      ptss_tree* t = nullptr;
      check(ptss_tree_parse(expr.c_str(), &t), "-e");
      trees.emplace_back(t);
      return trees;
    }
    if (file.empty()) throw UsageError{"give a tree file or -e TEXT"};
    std::istringstream in(read_file(file));
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      ptss_tree* t = nullptr;
      check(ptss_tree_parse(line.c_str(), &t), file + ":" + std::to_string(n));
      trees.emplace_back(t);
    }
    if (trees.empty()) throw DomainError{file + ": no trees"};
    return trees;
  }
};

std::string format(const ptss_tree* t) {
  char* s = nullptr;
  check(ptss_tree_format(t, &s));
  return take(s);
}

// Prints a `# tree` header before each block when a file holds several.
void banner(const std::vector<Tree>& trees, const Tree& t) {
  if (trees.size() > 1) std::cout << "# " << format(t.get()) << '\n';
}

void load_config(const std::string& path, ptss_gen_config* gen, size_t* count,
                 ptss_bench_options* bench) {
  if (path.empty()) return;
  check(ptss_config_apply(read_file(path).c_str(), gen, count, bench), path);
}

void progress(size_t done, size_t total, void*) {
  std::fprintf(stderr, "\r%zu/%zu", done, total);
  if (done == total) std::fputc('\n', stderr);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Process-tree state spaces: parsing, inversion, languages and shortest runs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ptss_version()));
  app.footer(
      "Tree grammar:\n"
      "  tree  := leaf | op '(' tree (',' tree)* ')'\n"
      "  op    := '->' | '<-' | 'X' | '+' | '*'   (loop takes exactly two children)\n"
      "  leaf  := activity name | 'tau'\n"
      "Exit codes: 0 success, 1 domain error, 2 usage error.");

  TreeInput parse_in, invert_in, lang_in, search_in;

  auto* parse_cmd = app.add_subcommand("parse", "validate trees and print the canonical form");
  parse_in.attach(parse_cmd);

  auto* invert_cmd = app.add_subcommand("invert", "print the inverse tree");
  invert_in.attach(invert_cmd);

  auto* lang_cmd = app.add_subcommand("lang", "enumerate the bounded language");
  lang_in.attach(lang_cmd);
  unsigned bound = 2;
  size_t limit = 0;
  std::string method = "def";
  lang_cmd->add_option("-k,--bound", bound, "redo iterations per loop")->capture_default_str();
  lang_cmd->add_option("--limit", limit, "maximum number of traces (0: library default)");
  lang_cmd->add_option("--method", method, "def (denotational) or statespace")
      ->check(CLI::IsMember({"def", "statespace"}))
      ->capture_default_str();

  auto* search_cmd = app.add_subcommand("search", "find a shortest run from F to C");
  search_in.attach(search_cmd);
  std::string strategy = "bd";
  ptss_search_options search_opts;
  ptss_search_options_init(&search_opts);
  bool show_time = false;
  search_cmd->add_option("-s,--strategy", strategy, "ud, bd or bdp")
      ->check(CLI::IsMember({"ud", "bd", "bdp"}))
      ->capture_default_str();
  search_cmd->add_option("--cap", search_opts.state_cap, "stored-state cap")->capture_default_str();
  search_cmd->add_option("--timeout-ms", search_opts.timeout_ms, "deadline, 0 for none");
  search_cmd->add_flag("--time", show_time, "also print wall time");

  auto* gen_cmd = app.add_subcommand("gen", "generate a random corpus");
  ptss_gen_config gen;
  ptss_gen_config_init(&gen);
  size_t count = 1000;
  std::string gen_config, gen_out;
  auto* seed_opt = gen_cmd->add_option("--seed", gen.seed, "random seed");
  auto* count_opt = gen_cmd->add_option("--count", count, "number of trees");
  auto* min_opt = gen_cmd->add_option("--min-act", gen.min_activities, "fewest activities");
  auto* max_opt = gen_cmd->add_option("--max-act", gen.max_activities, "most activities");
  auto* tau_opt = gen_cmd->add_option("--tau", gen.tau_probability, "tau leaf probability");
  gen_cmd->add_option("--config", gen_config, "key=value file; flags take precedence");
  gen_cmd->add_option("-o,--out", gen_out, "output file (default stdout)");

  auto* bench_cmd = app.add_subcommand("bench", "run UD, BD and BDP over a corpus");
  ptss_bench_options bench;
  ptss_bench_options_init(&bench);
  std::string corpus, csv_out, skip_out, bench_config;
  bool quiet = false, show_progress = false;
  bench_cmd->add_option("--corpus", corpus, ".ptt corpus")->required();
  bench_cmd->add_option("--out", csv_out, "CSV output file")->required();
  bench_cmd->add_option("--skips", skip_out, "skip report file (default stderr)");
  auto* reps_opt = bench_cmd->add_option("--repetitions", bench.repetitions, "timing repetitions");
  auto* cap_opt = bench_cmd->add_option("--cap", bench.search.state_cap, "stored-state cap");
  auto* timeout_opt = bench_cmd->add_option("--timeout-ms", bench.search.timeout_ms, "deadline");
  bench_cmd->add_option("--config", bench_config, "key=value file; flags take precedence");
  bench_cmd->add_flag("-q,--quiet", quiet, "do not print the summary");
  bench_cmd->add_flag("--progress", show_progress, "report progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*parse_cmd) {
      const auto trees = parse_in.load();
      for (const Tree& t : trees) std::cout << format(t.get()) << '\n';
    } else if (*invert_cmd) {
      const auto trees = invert_in.load();
      for (const Tree& t : trees) {
        ptss_tree* inv = nullptr;
        check(ptss_tree_invert(t.get(), &inv));
        std::cout << format(Tree(inv).get()) << '\n';
      }
    } else if (*lang_cmd) {
      const auto trees = lang_in.load();
      const auto m = method == "def" ? PTSS_LANGUAGE_DENOTATIONAL : PTSS_LANGUAGE_STATE_SPACE;
      for (const Tree& t : trees) {
        banner(trees, t);
        char* s = nullptr;
        check(ptss_language(t.get(), bound, limit, m, &s));
        std::cout << take(s);
      }
    } else if (*search_cmd) {
      const auto trees = search_in.load();
      const ptss_strategy s = strategy == "ud"   ? PTSS_STRATEGY_UD
                              : strategy == "bd" ? PTSS_STRATEGY_BD
                                                 : PTSS_STRATEGY_BDP;
      for (const Tree& t : trees) {
        banner(trees, t);
        ptss_outcome* raw = nullptr;
        check(ptss_search(t.get(), s, &search_opts, &raw));
        Outcome out(raw);
        char* run = nullptr;
        check(ptss_outcome_run(out.get(), &run));
        std::cout << take(run);
        std::cout << "length " << ptss_outcome_run_length(out.get()) << '\n';
        std::cout << "expanded " << ptss_outcome_expanded(out.get());
        if (s != PTSS_STRATEGY_UD)
          std::cout << " (forward " << ptss_outcome_forward_expanded(out.get()) << ", backward "
                    << ptss_outcome_backward_expanded(out.get()) << ')';
        std::cout << '\n';
        if (show_time) std::cout << "time_ms " << ptss_outcome_wall_ms(out.get()) << '\n';
      }
    } else if (*gen_cmd) {
      // Config first, then any flag the user actually gave.
      ptss_gen_config flags = gen;
      const size_t flag_count = count;
      ptss_gen_config_init(&gen);
      count = 1000;
      load_config(gen_config, &gen, &count, nullptr);
      if (*seed_opt) gen.seed = flags.seed;
      if (*count_opt) count = flag_count;
      if (*min_opt) gen.min_activities = flags.min_activities;
      if (*max_opt) gen.max_activities = flags.max_activities;
      if (*tau_opt) gen.tau_probability = flags.tau_probability;
      char* text = nullptr;
      check(ptss_generate_corpus(&gen, count, &text));
      write_file(gen_out, take(text));
    } else if (*bench_cmd) {
      const ptss_bench_options flags = bench;
      ptss_bench_options_init(&bench);
      load_config(bench_config, nullptr, nullptr, &bench);
      if (*reps_opt) bench.repetitions = flags.repetitions;
      if (*cap_opt) bench.search.state_cap = flags.search.state_cap;
      if (*timeout_opt) bench.search.timeout_ms = flags.search.timeout_ms;
      if (show_progress) bench.progress = progress;

      const std::string text = read_file(corpus);
      char *csv = nullptr, *skips = nullptr, *summary = nullptr;
      check(ptss_bench_run(text.c_str(), &bench, &csv, &skips, quiet ? nullptr : &summary),
            corpus);
      const std::string csv_text = take(csv), skip_text = take(skips);
      const std::string summary_text = summary ? take(summary) : std::string();
      write_file(csv_out, csv_text);
      if (!skip_out.empty())
        write_file(skip_out, skip_text);
      else if (!skip_text.empty())
        std::cerr << "skipped trees:\n" << skip_text;
      std::cout << summary_text;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.message << "\nRun with --help for more information.\n";
    return kUsageError;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.message << '\n';
    return kDomainError;
  }
  return 0;
}
