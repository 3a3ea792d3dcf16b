/* C interface to the process-tree state-space library.
 *
 * Every function that can fail returns a ptss_status; on failure a message
 * is available from ptss_last_error() on the calling thread until the next
 * call into the library from that thread. Strings returned through `char**`
 * are owned by the caller and released with ptss_string_free().
 */
#ifndef PTSS_PTSS_H
#define PTSS_PTSS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PTSS_API __declspec(dllexport)
#else
#define PTSS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ptss_status {
  PTSS_OK = 0,
  PTSS_ERR_PARSE = 1,
  PTSS_ERR_INVALID_TREE = 2,
  PTSS_ERR_ILLEGAL_TRANSITION = 3,
  PTSS_ERR_CAP_EXCEEDED = 4,
  PTSS_ERR_TIMEOUT = 5,
  PTSS_ERR_LANGUAGE_OVERFLOW = 6,
  PTSS_ERR_INVALID_ARGUMENT = 7,
  PTSS_ERR_INTERNAL = 8
} ptss_status;

typedef enum ptss_strategy {
  PTSS_STRATEGY_UD = 0,
  PTSS_STRATEGY_BD = 1,
  PTSS_STRATEGY_BDP = 2
} ptss_strategy;

typedef enum ptss_language_method {
  /* Denotational definition with bounded loops. */
  PTSS_LANGUAGE_DENOTATIONAL = 0,
  /* Projection of bounded runs over the reduced state space. */
  PTSS_LANGUAGE_STATE_SPACE = 1
} ptss_language_method;

typedef struct ptss_tree ptss_tree;
typedef struct ptss_outcome ptss_outcome;

typedef struct ptss_search_options {
  size_t state_cap;   /* stored states over both directions */
  int64_t timeout_ms; /* <= 0 disables the deadline */
} ptss_search_options;

typedef struct ptss_gen_config {
  uint64_t seed;
  unsigned min_activities;
  unsigned max_activities;
  double operator_alpha[4]; /* sequence, choice, parallel, loop */
  double tau_probability;
  unsigned min_branching;
  unsigned max_branching;
} ptss_gen_config;

typedef void (*ptss_progress_fn)(size_t done, size_t total, void* user);

typedef struct ptss_bench_options {
  ptss_search_options search;
  unsigned repetitions;
  ptss_progress_fn progress; /* may be NULL */
  void* progress_user;
} ptss_bench_options;

PTSS_API const char* ptss_version(void);
PTSS_API const char* ptss_last_error(void);
PTSS_API const char* ptss_status_name(ptss_status status);
PTSS_API void ptss_string_free(char* s);

/* Trees */
PTSS_API ptss_status ptss_tree_parse(const char* text, ptss_tree** out);
PTSS_API void ptss_tree_free(ptss_tree* tree);
PTSS_API ptss_status ptss_tree_format(const ptss_tree* tree, char** out);
PTSS_API ptss_status ptss_tree_invert(const ptss_tree* tree, ptss_tree** out);
PTSS_API size_t ptss_tree_size(const ptss_tree* tree);
PTSS_API size_t ptss_tree_activity_count(const ptss_tree* tree);

/* Checks that `run_text` (one `v7 F->O` per line) replays the tree from the
 * all-Future state; *reaches_final is set to 1 if it ends all-Closed. */
PTSS_API ptss_status ptss_run_check(const ptss_tree* tree, const char* run_text,
                                    int* reaches_final);

/* Sorted traces, one `<a,b>` per line. */
PTSS_API ptss_status ptss_language(const ptss_tree* tree, unsigned bound, size_t limit,
                                   ptss_language_method method, char** out);

/* Search */
PTSS_API void ptss_search_options_init(ptss_search_options* options);
PTSS_API ptss_status ptss_search(const ptss_tree* tree, ptss_strategy strategy,
                                 const ptss_search_options* options, ptss_outcome** out);
PTSS_API void ptss_outcome_free(ptss_outcome* outcome);
PTSS_API size_t ptss_outcome_run_length(const ptss_outcome* outcome);
PTSS_API size_t ptss_outcome_expanded(const ptss_outcome* outcome);
PTSS_API size_t ptss_outcome_forward_expanded(const ptss_outcome* outcome);
PTSS_API size_t ptss_outcome_backward_expanded(const ptss_outcome* outcome);
PTSS_API double ptss_outcome_wall_ms(const ptss_outcome* outcome);
PTSS_API ptss_status ptss_outcome_run(const ptss_outcome* outcome, char** out);

/* Generation: writes a `.ptt` corpus. */
PTSS_API void ptss_gen_config_init(ptss_gen_config* config);
PTSS_API ptss_status ptss_generate_corpus(const ptss_gen_config* config, size_t count,
                                          char** out);

/* Benchmark over `.ptt` corpus text. Any of the outputs may be NULL. */
PTSS_API void ptss_bench_options_init(ptss_bench_options* options);
PTSS_API ptss_status ptss_bench_run(const char* corpus_text, const ptss_bench_options* options,
                                    char** csv, char** skip_report, char** summary);

/* Applies key=value configuration text on top of the given settings. Any
 * pointer may be NULL. */
PTSS_API ptss_status ptss_config_apply(const char* text, ptss_gen_config* gen, size_t* count,
                                       ptss_bench_options* bench);

#ifdef __cplusplus
}
#endif

#endif
