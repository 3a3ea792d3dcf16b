#include "ptss/ptss.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "ptss/bench.hpp"
#include "ptss/error.hpp"
#include "ptss/generator.hpp"
#include "ptss/language.hpp"
#include "ptss/search.hpp"

struct ptss_tree {
  ptss::ProcessTree tree;
};

struct ptss_outcome {
  ptss::SearchOutcome outcome;
};

namespace {

thread_local std::string last_error;

ptss_status fail(ptss_status status, const char* message) {
  last_error = message;
  return status;
}

// Runs `body`, translating library exceptions into status codes.
template <typename F>
ptss_status guarded(F&& body) {
  last_error.clear();
  try {
    body();
    return PTSS_OK;
  } catch (const ptss::ParseError& e) {
    return fail(PTSS_ERR_PARSE, e.what());
  } catch (const ptss::InvalidTree& e) {
    return fail(PTSS_ERR_INVALID_TREE, e.what());
  } catch (const ptss::IllegalTransition& e) {
    return fail(PTSS_ERR_ILLEGAL_TRANSITION, e.what());
  } catch (const ptss::CapExceeded& e) {
    return fail(PTSS_ERR_CAP_EXCEEDED, e.what());
  } catch (const ptss::Timeout& e) {
    return fail(PTSS_ERR_TIMEOUT, e.what());
  } catch (const ptss::LanguageOverflow& e) {
    return fail(PTSS_ERR_LANGUAGE_OVERFLOW, e.what());
  } catch (const ptss::Error& e) {
    return fail(PTSS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(PTSS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PTSS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PTSS_ERR_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw ptss::Error(std::string(what) + " must not be NULL");
}

ptss::SearchOptions to_search_options(const ptss_search_options* o) {
  ptss::SearchOptions out;
  if (!o) return out;
  if (o->state_cap == 0) throw ptss::Error("state cap must be positive");
  out.state_cap = o->state_cap;
  if (o->timeout_ms > 0) out.timeout = std::chrono::milliseconds(o->timeout_ms);
  return out;
}

ptss::GenConfig to_gen_config(const ptss_gen_config& c) {
  ptss::GenConfig out;
  out.seed = c.seed;
  out.min_activities = c.min_activities;
  out.max_activities = c.max_activities;
  for (int i = 0; i < 4; ++i) out.operator_alpha[i] = c.operator_alpha[i];
  out.tau_probability = c.tau_probability;
  out.min_branching = c.min_branching;
  out.max_branching = c.max_branching;
  return out;
}

void from_gen_config(const ptss::GenConfig& c, ptss_gen_config& out) {
  out.seed = c.seed;
  out.min_activities = c.min_activities;
  out.max_activities = c.max_activities;
  for (int i = 0; i < 4; ++i) out.operator_alpha[i] = c.operator_alpha[i];
  out.tau_probability = c.tau_probability;
  out.min_branching = c.min_branching;
  out.max_branching = c.max_branching;
}

}  // namespace

extern "C" {

const char* ptss_version(void) { return "1.0.0"; }

const char* ptss_last_error(void) { return last_error.c_str(); }

const char* ptss_status_name(ptss_status status) {
  switch (status) {
    case PTSS_OK: return "ok";
    case PTSS_ERR_PARSE: return "parse error";
    case PTSS_ERR_INVALID_TREE: return "invalid tree";
    case PTSS_ERR_ILLEGAL_TRANSITION: return "illegal transition";
    case PTSS_ERR_CAP_EXCEEDED: return "state cap exceeded";
    case PTSS_ERR_TIMEOUT: return "timeout";
    case PTSS_ERR_LANGUAGE_OVERFLOW: return "language overflow";
    case PTSS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case PTSS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void ptss_string_free(char* s) { std::free(s); }

ptss_status ptss_tree_parse(const char* text, ptss_tree** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new ptss_tree{ptss::parse_tree(text)};
  });
}

void ptss_tree_free(ptss_tree* tree) { delete tree; }

ptss_status ptss_tree_format(const ptss_tree* tree, char** out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    *out = duplicate(ptss::format_tree(tree->tree));
  });
}

ptss_status ptss_tree_invert(const ptss_tree* tree, ptss_tree** out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    *out = new ptss_tree{ptss::invert(tree->tree)};
  });
}

size_t ptss_tree_size(const ptss_tree* tree) { return tree ? tree->tree.size() : 0; }

size_t ptss_tree_activity_count(const ptss_tree* tree) {
  return tree ? tree->tree.activity_count() : 0;
}

ptss_status ptss_run_check(const ptss_tree* tree, const char* run_text, int* reaches_final) {
  return guarded([&] {
    require(tree, "tree");
    require(run_text, "run_text");
    const ptss::Run run = ptss::parse_run(run_text);
    const auto end = ptss::replay(tree->tree, ptss::initial_state(tree->tree), run);
    if (reaches_final) *reaches_final = end.uniform(ptss::VertexState::Closed) ? 1 : 0;
  });
}

ptss_status ptss_language(const ptss_tree* tree, unsigned bound, size_t limit,
                          ptss_language_method method, char** out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    if (limit == 0) limit = ptss::kDefaultTraceLimit;
    ptss::Language lang;
    switch (method) {
      case PTSS_LANGUAGE_DENOTATIONAL:
        lang = ptss::enumerate_language(tree->tree, bound, limit);
        break;
      case PTSS_LANGUAGE_STATE_SPACE:
        lang = ptss::statespace_language(tree->tree, bound, limit);
        break;
      default: throw ptss::Error("unknown language method");
    }
    std::string text;
    for (const ptss::Trace& t : lang) {
      text += ptss::format_trace(t);
      text += '\n';
    }
    *out = duplicate(text);
  });
}

void ptss_search_options_init(ptss_search_options* options) {
  if (!options) return;
  options->state_cap = ptss::SearchOptions{}.state_cap;
  options->timeout_ms = 0;
}

ptss_status ptss_search(const ptss_tree* tree, ptss_strategy strategy,
                        const ptss_search_options* options, ptss_outcome** out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    ptss::Strategy s;
    switch (strategy) {
      case PTSS_STRATEGY_UD: s = ptss::Strategy::UD; break;
      case PTSS_STRATEGY_BD: s = ptss::Strategy::BD; break;
      case PTSS_STRATEGY_BDP: s = ptss::Strategy::BDP; break;
      default: throw ptss::Error("unknown strategy");
    }
    *out = new ptss_outcome{ptss::search(tree->tree, s, to_search_options(options))};
  });
}

void ptss_outcome_free(ptss_outcome* outcome) { delete outcome; }

size_t ptss_outcome_run_length(const ptss_outcome* o) { return o ? o->outcome.run_length : 0; }
size_t ptss_outcome_expanded(const ptss_outcome* o) { return o ? o->outcome.expanded_states : 0; }
size_t ptss_outcome_forward_expanded(const ptss_outcome* o) {
  return o ? o->outcome.forward_expanded : 0;
}
size_t ptss_outcome_backward_expanded(const ptss_outcome* o) {
  return o ? o->outcome.backward_expanded : 0;
}
double ptss_outcome_wall_ms(const ptss_outcome* o) {
  return o ? static_cast<double>(o->outcome.wall_time.count()) / 1e6 : 0.0;
}

ptss_status ptss_outcome_run(const ptss_outcome* outcome, char** out) {
  return guarded([&] {
    require(outcome, "outcome");
    require(out, "out");
    *out = duplicate(ptss::format_run(outcome->outcome.run));
  });
}

void ptss_gen_config_init(ptss_gen_config* config) {
  if (config) from_gen_config(ptss::GenConfig{}, *config);
}

ptss_status ptss_generate_corpus(const ptss_gen_config* config, size_t count, char** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const ptss::GenConfig gen = to_gen_config(*config);
    std::ostringstream text;
    ptss::write_corpus(text, gen, ptss::generate_corpus(gen, count));
    *out = duplicate(text.str());
  });
}

void ptss_bench_options_init(ptss_bench_options* options) {
  if (!options) return;
  ptss_search_options_init(&options->search);
  options->repetitions = ptss::BenchOptions{}.repetitions;
  options->progress = nullptr;
  options->progress_user = nullptr;
}

ptss_status ptss_bench_run(const char* corpus_text, const ptss_bench_options* options,
                           char** csv, char** skip_report, char** summary) {
  return guarded([&] {
    require(corpus_text, "corpus_text");
    std::istringstream in{std::string(corpus_text)};
    const auto corpus = ptss::read_corpus(in);
    ptss::BenchOptions bench;
    if (options) {
      bench.search = to_search_options(&options->search);
      bench.repetitions = options->repetitions;
      if (options->progress) {
        auto fn = options->progress;
        void* user = options->progress_user;
        bench.progress = [fn, user](std::size_t done, std::size_t total) { fn(done, total, user); };
      }
    }
    const auto records = ptss::run_benchmark(corpus, bench);
    std::string csv_text, skip_text, summary_text;
    if (csv) {
      std::ostringstream s;
      ptss::write_csv(s, records);
      csv_text = s.str();
    }
    if (skip_report) {
      std::ostringstream s;
      ptss::write_skip_report(s, records);
      skip_text = s.str();
    }
    if (summary) summary_text = ptss::format_summary(ptss::aggregate(records));
    // Allocate only after everything that can throw has run.
    if (csv) *csv = duplicate(csv_text);
    if (skip_report) *skip_report = duplicate(skip_text);
    if (summary) *summary = duplicate(summary_text);
  });
}

ptss_status ptss_config_apply(const char* text, ptss_gen_config* gen, size_t* count,
                              ptss_bench_options* bench) {
  return guarded([&] {
    require(text, "text");
    ptss::RunConfig config;
    if (gen) config.gen = to_gen_config(*gen);
    if (count) config.count = *count;
    if (bench) {
      config.search = to_search_options(&bench->search);
      config.repetitions = bench->repetitions;
    }
    std::istringstream in{std::string(text)};
    ptss::apply_config(in, config);
    config.gen.validate();
    if (gen) from_gen_config(config.gen, *gen);
    if (count) *count = config.count;
    if (bench) {
      bench->search.state_cap = config.search.state_cap;
      bench->search.timeout_ms =
          config.search.timeout
              ? std::chrono::duration_cast<std::chrono::milliseconds>(*config.search.timeout).count()
              : 0;
      bench->repetitions = config.repetitions;
    }
  });
}

}  // extern "C"
