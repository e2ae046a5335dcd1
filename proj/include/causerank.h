/* causerank — event-causality response re-ranking library.
 *
 * C interface to the shared library: opaque handles, integer status codes,
 * and UTF-8 JSON strings for structured data. Every function returning a
 * crk_status sets a thread-local detail message readable via crk_last_error()
 * on failure. Strings returned through char** are heap-allocated and must be
 * released with crk_string_free().
 *
 * Handles are not reference counted across types: a crk_index keeps its own
 * reference to the pool it was built from, so freeing handles in any order is
 * safe. Individual handles are not thread-safe to free twice; treat them as
 * single-owner.
 */
#ifndef CAUSERANK_H
#define CAUSERANK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CRK_API __declspec(dllexport)
#else
#define CRK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum crk_status {
  CRK_OK = 0,
  CRK_ERR_IO = 1,        /* missing or unreadable file */
  CRK_ERR_PARSE = 2,     /* malformed file or record content */
  CRK_ERR_INVALID = 3,   /* invalid argument, config, or domain value */
  CRK_ERR_DIMENSION = 4, /* vector dimension mismatch */
  CRK_ERR_OOV = 5,       /* out-of-vocabulary token under policy=error */
  CRK_ERR_STATE = 6,     /* checksum mismatch, stale cache, bad handle state */
  CRK_ERR_ITEM = 7,      /* one or more per-item failures in a batch run */
  CRK_ERR_INTERNAL = 8
} crk_status;

CRK_API const char* crk_status_name(crk_status status);

/* Detail message for the most recent failing call on this thread. */
CRK_API const char* crk_last_error(void);

CRK_API const char* crk_version(void);

CRK_API void crk_string_free(char* s);

/* ---- causality pool ------------------------------------------------- */

typedef struct crk_pool crk_pool;

/* strict != 0 fails on the first malformed line; otherwise malformed lines
 * are skipped and counted. */
CRK_API crk_status crk_pool_load(const char* path, int strict, crk_pool** out);
CRK_API crk_status crk_pool_save(const crk_pool* pool, const char* path);
CRK_API size_t crk_pool_size(const crk_pool* pool);
CRK_API size_t crk_pool_collapsed(const crk_pool* pool);
CRK_API size_t crk_pool_skipped(const crk_pool* pool);
CRK_API void crk_pool_free(crk_pool* pool);

/* ---- word vectors ---------------------------------------------------- */

typedef struct crk_vectors crk_vectors;

CRK_API crk_status crk_vectors_load(const char* path, size_t expected_dim, crk_vectors** out);
CRK_API size_t crk_vectors_dim(const crk_vectors* vectors);
CRK_API size_t crk_vectors_size(const crk_vectors* vectors);
CRK_API void crk_vectors_free(crk_vectors* vectors);

/* ---- RFTM weights ---------------------------------------------------- */

typedef struct crk_weights crk_weights;

CRK_API crk_status crk_weights_random(size_t dim, uint64_t seed, crk_weights** out);
CRK_API crk_status crk_weights_load(const char* path, crk_weights** out);
CRK_API crk_status crk_weights_save(const crk_weights* weights, const char* path);
CRK_API crk_status crk_weights_export_json(const crk_weights* weights, char** out_json);
CRK_API size_t crk_weights_dim(const crk_weights* weights);
CRK_API void crk_weights_free(crk_weights* weights);

/* ---- event embedder --------------------------------------------------- */

typedef struct crk_embedder crk_embedder;

/* oov_policy: 0 = error, 1 = zero, 2 = skip. predicates may be NULL to share
 * the argument store. The embedder holds references; freeing the weight and
 * vector handles afterwards is safe. */
CRK_API crk_status crk_embedder_new(const crk_weights* weights, const crk_vectors* predicates,
                                    const crk_vectors* arguments, int oov_policy,
                                    crk_embedder** out);

/* Embeds an event JSON document ({"predicate": ..., "arguments": [...]})
 * into out_values (capacity must be >= the weight dimension). */
CRK_API crk_status crk_embedder_embed_json(const crk_embedder* embedder, const char* event_json,
                                           double* out_values, size_t capacity);
CRK_API void crk_embedder_free(crk_embedder* embedder);

/* ---- causality index -------------------------------------------------- */

typedef struct crk_index crk_index;

CRK_API crk_status crk_index_build(const crk_pool* pool, const crk_embedder* embedder,
                                   int threads, crk_index** out);
CRK_API crk_status crk_index_save(const crk_index* index, const char* path);

/* Fails with CRK_ERR_STATE when the cache does not match the pool/weights. */
CRK_API crk_status crk_index_open(const crk_pool* pool, const crk_embedder* embedder,
                                  const char* path, crk_index** out);
CRK_API size_t crk_index_entries(const crk_index* index);
CRK_API size_t crk_index_embedded(const crk_index* index);
CRK_API size_t crk_index_embed_failures(const crk_index* index);
CRK_API void crk_index_free(crk_index* index);

/* ---- matching ---------------------------------------------------------
 * match_config_json (all fields optional):
 *   {"similarity_threshold": 0.8660254, "default_lift": 2.0,
 *    "allow_inverse": true, "min_effective_lift": 2.0,
 *    "objective": "lift_emb"|"mean_sim", "search": "pruned"|"brute"}
 * The result JSON mirrors the MatchResult record. */

CRK_API crk_status crk_match_exact(const crk_index* index, const char* history_event_json,
                                   const char* response_event_json,
                                   const char* match_config_json, char** out_json);

CRK_API crk_status crk_match_embedded(const crk_index* index, const crk_embedder* embedder,
                                      const char* history_event_json,
                                      const char* response_event_json,
                                      const char* match_config_json, char** out_json);

/* ---- whole-run commands ------------------------------------------------
 * config_json uses the same schema as the CLI config file (see README).
 * Each returns a report JSON document. crk_run_rerank returns CRK_ERR_ITEM
 * when some input lines failed; the output file is still written and the
 * summary is in crk_last_error(). */

CRK_API crk_status crk_run_build_index(const char* config_json, char** out_report_json);
CRK_API crk_status crk_run_rerank(const char* config_json, char** out_report_json);
CRK_API crk_status crk_run_evaluate(const char* config_json, char** out_report_json);
CRK_API crk_status crk_run_inspect_match(const char* config_json,
                                         const char* history_event_json,
                                         const char* response_event_json, char** out_json);

/* Aligned-column rendering of an evaluation report. */
CRK_API crk_status crk_render_eval_text(const char* report_json, char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* CAUSERANK_H */
