/*
 * irlsum C API: corpus generation and I/O, the three training regimes
 * (MLE, self-critical RL, inverse-RL reward learning), checkpointing, and
 * report emission behind opaque handles. Every entry point returns a status
 * code; irlsum_last_error() describes the most recent failure on the calling
 * thread.
 */
#ifndef IRLSUM_H
#define IRLSUM_H

#include <stdint.h>

#if defined(_WIN32)
#  ifdef IRLSUM_BUILD
#    define IRLSUM_API __declspec(dllexport)
#  else
#    define IRLSUM_API __declspec(dllimport)
#  endif
#else
#  define IRLSUM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum irlsum_status {
  IRLSUM_OK = 0,
  IRLSUM_ERR_INVALID_ARGUMENT = 1,
  IRLSUM_ERR_IO = 2,
  IRLSUM_ERR_STATE = 3,
  IRLSUM_ERR_INTERNAL = 4
} irlsum_status;

typedef struct irlsum_corpus irlsum_corpus;
typedef struct irlsum_config irlsum_config;
typedef struct irlsum_model irlsum_model;
typedef struct irlsum_trajectory irlsum_trajectory;
typedef struct irlsum_report irlsum_report;

IRLSUM_API const char* irlsum_version(void);
IRLSUM_API const char* irlsum_last_error(void);

/* Strings returned through char** outputs are freed with this. */
IRLSUM_API void irlsum_string_free(char* s);

/* ---- corpus ---- */

/* strategy: "lead-copy" | "paraphrase-k" | "mixed" */
IRLSUM_API irlsum_status irlsum_corpus_generate(const char* strategy, int pairs,
                                                int min_sentences, int max_sentences,
                                                double paraphrase_rate, uint64_t seed,
                                                irlsum_corpus** out);
IRLSUM_API irlsum_status irlsum_corpus_load(const char* path, irlsum_corpus** out);
IRLSUM_API irlsum_status irlsum_corpus_save(const irlsum_corpus* corpus, const char* path);
IRLSUM_API int irlsum_corpus_size(const irlsum_corpus* corpus);
/* Mean components of the references: rouge, novelty, coverage, compression. */
IRLSUM_API irlsum_status irlsum_corpus_reference_means(const irlsum_corpus* corpus,
                                                       int novelty_order, double out_means[4]);
IRLSUM_API void irlsum_corpus_free(irlsum_corpus* corpus);

/* ---- config ---- */

/* preset: "paper-scale" | "desk-scale" */
IRLSUM_API irlsum_status irlsum_config_create(const char* preset, irlsum_config** out);
IRLSUM_API irlsum_status irlsum_config_load_file(irlsum_config* cfg, const char* path);
/* Sets one flat key ("epochs", "seed", ...) from its textual value. */
IRLSUM_API irlsum_status irlsum_config_set(irlsum_config* cfg, const char* key,
                                           const char* value);
IRLSUM_API irlsum_status irlsum_config_to_json(const irlsum_config* cfg, char** out_json);
IRLSUM_API void irlsum_config_free(irlsum_config* cfg);

/* ---- training ---- */

IRLSUM_API irlsum_status irlsum_train_mle(const irlsum_corpus* corpus, const irlsum_config* cfg,
                                          irlsum_model** out);
IRLSUM_API irlsum_status irlsum_train_rl(const irlsum_model* pretrained,
                                         const irlsum_corpus* corpus, const irlsum_config* cfg,
                                         irlsum_model** out);
IRLSUM_API irlsum_status irlsum_train_irl(const irlsum_model* pretrained,
                                          const irlsum_corpus* corpus, const irlsum_config* cfg,
                                          irlsum_model** out, irlsum_trajectory** out_trajectory);

/* ---- models ---- */

IRLSUM_API irlsum_status irlsum_model_save(const irlsum_model* model, const char* path);
IRLSUM_API irlsum_status irlsum_model_load(const char* path, irlsum_model** out);
/* 16 hex digits plus NUL. */
IRLSUM_API irlsum_status irlsum_model_vocab_hash(const irlsum_model* model, char out_hex[17]);
IRLSUM_API void irlsum_model_free(irlsum_model* model);

/* ---- trajectories ---- */

IRLSUM_API irlsum_status irlsum_trajectory_save_csv(const irlsum_trajectory* traj,
                                                    const char* path);
IRLSUM_API irlsum_status irlsum_trajectory_load_csv(const char* path, irlsum_trajectory** out);
IRLSUM_API irlsum_status irlsum_trajectory_save_svg(const irlsum_trajectory* traj,
                                                    const char* path);
IRLSUM_API void irlsum_trajectory_free(irlsum_trajectory* traj);

/* ---- evaluation reports ---- */

/* The corpus must outlive the report handle. */
IRLSUM_API irlsum_status irlsum_report_create(const irlsum_corpus* corpus,
                                              const irlsum_config* cfg, irlsum_report** out);
/* The references themselves as a system row. */
IRLSUM_API irlsum_status irlsum_report_add_reference(irlsum_report* report, const char* name);
/* Greedy decodes of the model; all models in one report must share a vocab. */
IRLSUM_API irlsum_status irlsum_report_add_model(irlsum_report* report, const char* name,
                                                 const irlsum_model* model);
/* Writes component_table_<suffix>.csv, novelty_profile_<suffix>.csv and
 * entity_stats_<suffix>.csv into out_dir. */
IRLSUM_API irlsum_status irlsum_report_write(const irlsum_report* report, const char* out_dir,
                                             const char* suffix);
IRLSUM_API void irlsum_report_free(irlsum_report* report);

/* ---- utilities ---- */

/* FNV-1a content hash of a file, 16 hex digits plus NUL. */
IRLSUM_API irlsum_status irlsum_file_hash(const char* path, char out_hex[17]);

#ifdef __cplusplus
}
#endif

#endif /* IRLSUM_H */
