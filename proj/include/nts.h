/* C API for the noisy-tree-search simulator. Opaque handles, integer status
 * codes; every function that can fail returns nts_status and leaves a
 * human-readable message in nts_last_error() (thread-local). */

#ifndef NTS_H
#define NTS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NTS_API __declspec(dllexport)
#else
#define NTS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nts_status {
  NTS_OK = 0,
  NTS_ERR_INVALID_ARGUMENT = 1,
  NTS_ERR_PARSE = 2,
  NTS_ERR_IO = 3,
  NTS_ERR_BUDGET = 4,   /* generator exceeds the node budget */
  NTS_ERR_CAP = 5,      /* instance exceeds the enumeration cap */
  NTS_ERR_UNSUPPORTED = 6,
  NTS_ERR_INTERNAL = 7,
} nts_status;

NTS_API const char* nts_status_name(nts_status status);
NTS_API const char* nts_last_error(void);

/* --- Trees ---------------------------------------------------------------
 * generator: "complete:9,6,6", "completeb:2,5", "completen:8,512",
 * "caterpillar:10,5,5", "trimmed:4,6", "path:13", "star:8[,leaf]".
 * budget 0 means the default (1e6 nodes). */
typedef struct nts_tree nts_tree;

NTS_API nts_status nts_tree_create(const char* generator, uint64_t budget,
                                   nts_tree** out);
NTS_API nts_status nts_tree_load(const char* path, nts_tree** out);
NTS_API nts_status nts_tree_save(const nts_tree* tree, const char* path);
/* Writes the line-oriented text format; *written excludes the terminator. */
NTS_API nts_status nts_tree_render(const nts_tree* tree, char* buf,
                                   size_t cap, size_t* written);
NTS_API void nts_tree_free(nts_tree* tree);
NTS_API uint64_t nts_tree_node_count(const nts_tree* tree);
NTS_API uint64_t nts_tree_depth(const nts_tree* tree);
NTS_API uint64_t nts_tree_treasure(const nts_tree* tree);
NTS_API uint64_t nts_tree_treasure_depth(const nts_tree* tree);

/* --- Simulation -------------------------------------------------------------
 * Noise is described by a model string plus the scalar q:
 * "random", "semiadv:root", "semiadv:child", "semiadv:file=PATH";
 * q_file (optional, lines "node q") overrides q per node. */
typedef struct nts_sim_params {
  uint64_t trials;
  uint64_t seed;
  double epsilon;   /* a_sep / a_two_layers radius parameter */
  double lambda;    /* probabilistic following */
  double kappa1;    /* a_two_layers; <= 0 picks the default */
  double kappa2;
  uint64_t step_cap; /* censoring cap for probabilistic following */
  int threads;       /* 0: NTS_THREADS or hardware */
} nts_sim_params;

NTS_API void nts_sim_params_init(nts_sim_params* params);

typedef struct nts_result nts_result;

/* algorithm: a_walk | a_natural | a_walk_uniform_theta | a_sep | a_loop |
 * a_two_layers | pf. The model string is echoed into rendered rows. */
NTS_API nts_status nts_simulate(const char* tree_spec, const char* model,
                                double q, const char* q_file,
                                const char* algorithm,
                                const nts_sim_params* params,
                                uint64_t tree_budget, nts_result** out);

/* metric: "moves" or "queries". */
NTS_API int nts_result_has_metric(const nts_result* r, const char* metric);
NTS_API double nts_result_mean(const nts_result* r, const char* metric);
NTS_API double nts_result_stderr(const nts_result* r, const char* metric);
NTS_API double nts_result_median(const nts_result* r, const char* metric);
NTS_API double nts_result_p95(const nts_result* r, const char* metric);
NTS_API double nts_result_censored_fraction(const nts_result* r);

/* format: "csv" (one row), "csv_header", "jsonl". Writes a NUL-terminated
 * string; *written receives the length excluding the terminator. Returns
 * NTS_ERR_INVALID_ARGUMENT if cap is too small. */
NTS_API nts_status nts_result_render(const nts_result* r, const char* format,
                                     char* buf, size_t cap, size_t* written);
NTS_API void nts_result_free(nts_result* r);

/* One trial traced step by step: "action node moves queries" per line. */
typedef void (*nts_trace_cb)(const char* line, void* user);
NTS_API nts_status nts_trace_trial(const char* tree_spec, const char* model,
                                   double q, const char* algorithm,
                                   const nts_sim_params* params,
                                   uint64_t trial_index, nts_trace_cb cb,
                                   void* user);

/* --- Exact oracle ----------------------------------------------------------
 * Expected cost by exhaustive enumeration of the advice distribution
 * (instances of at most `cap` advice nodes; 0 means the default 12).
 * rational_buf receives the exact value as "num/den" when non-NULL. */
NTS_API nts_status nts_oracle_expected_cost(const char* tree_spec,
                                            const char* model, double q,
                                            const char* algorithm,
                                            const char* metric, double lambda,
                                            uint32_t cap, char* rational_buf,
                                            size_t rational_cap,
                                            double* value);

/* --- Experiment files -------------------------------------------------------
 * Runs every section of a declarative experiment file; writes CSV and/or
 * JSON lines to the given paths (either may be NULL). */
NTS_API nts_status nts_experiment_run_file(const char* config_path,
                                           const char* csv_path,
                                           const char* jsonl_path,
                                           int threads);

/* --- Verification ------------------------------------------------------------
 * criterion: "all" or one of AC1..AC12. The callback receives one line per
 * criterion; all_passed (may be NULL) is set to 1 iff everything passed. */
typedef void (*nts_verify_cb)(const char* criterion, int passed,
                              const char* detail, void* user);
NTS_API nts_status nts_verify(const char* criterion, int threads,
                              nts_verify_cb cb, void* user, int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* NTS_H */
