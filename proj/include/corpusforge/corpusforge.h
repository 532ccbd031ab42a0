// Copyright 2026 The CorpusForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the corpusforge library.
 *
 * Every function returns a cf_status. On failure a message is available
 * from cf_last_error() on the calling thread until its next library call.
 * Strings returned through char** out-parameters are allocated by the
 * library and must be released with cf_free(). Options structs must be
 * initialized with their *_init function before fields are changed.
 * Optional path fields are NULL when unused.
 */

#ifndef CORPUSFORGE_H_
#define CORPUSFORGE_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(CF_BUILDING_LIBRARY)
#define CF_API __attribute__((visibility("default")))
#else
#define CF_API
#endif

typedef enum cf_status {
  CF_OK = 0,
  CF_ERR_INTERNAL = 1,
  CF_ERR_CONFIG = 2, /* invalid configuration or argument */
  CF_ERR_DATA = 3,   /* malformed or inconsistent input data */
  CF_ERR_IO = 4
} cf_status;

/* Which field of a `src<TAB>tgt` line to read. CF_SIDE_NONE means the
 * file is monolingual, or the target side of a parallel file. */
typedef enum cf_side { CF_SIDE_NONE = 0, CF_SIDE_SRC = 1, CF_SIDE_TGT = 2 } cf_side;

CF_API const char* cf_version(void);
CF_API const char* cf_last_error(void);
CF_API void cf_free(void* ptr);

/* ---- Text ---- */

CF_API cf_status cf_text_normalize(const char* text, char** out);
CF_API cf_status cf_text_tokenize(const char* text, char** out);
CF_API cf_status cf_text_detokenize(const char* tokens, char** out);
/* map_json receives a JSON array of placeholder slots. */
CF_API cf_status cf_text_mask(const char* text, char** masked, char** map_json);
CF_API cf_status cf_text_unmask(const char* text, const char* map_json, char** out);

/* ---- Corpus files ---- */

typedef struct cf_normalize_options {
  int tokenize;             /* default 1 */
  int protect_placeholders; /* default 1 */
  unsigned threads;         /* default 1 */
} cf_normalize_options;

CF_API void cf_normalize_options_init(cf_normalize_options* options);
CF_API cf_status cf_normalize_file(const char* in, const char* out,
                                   const cf_normalize_options* options, uint64_t* lines);
CF_API cf_status cf_mask_file(const char* in, const char* out, const char* map_out,
                              uint64_t* lines);
CF_API cf_status cf_unmask_file(const char* in, const char* map_in, const char* out,
                                uint64_t* lines);
CF_API cf_status cf_tokenize_file(const char* in, const char* out, unsigned threads,
                                  uint64_t* lines);
CF_API cf_status cf_detokenize_file(const char* in, const char* out, uint64_t* lines);
CF_API cf_status cf_shuffle_file(const char* in, const char* out, uint64_t seed);
/* Writes <prefix>.0 .. <prefix>.<k-1>, line i to shard i mod k. */
CF_API cf_status cf_shard_file(const char* in, const char* prefix, size_t k);
CF_API cf_status cf_merge_files(const char* const* shards, size_t count, const char* out,
                                int interleave);
CF_API cf_status cf_dedupe_file(const char* in, const char* out, uint64_t* kept,
                                uint64_t* removed);

/* ---- Truecasing ---- */

typedef struct cf_truecaser cf_truecaser;

CF_API cf_status cf_truecaser_train_file(const char* in, cf_side side, cf_truecaser** out);
CF_API cf_status cf_truecaser_load(const char* path, cf_truecaser** out);
CF_API cf_status cf_truecaser_save(const cf_truecaser* model, const char* path);
CF_API cf_status cf_truecaser_apply(const cf_truecaser* model, const char* tokens, char** out);
CF_API cf_status cf_truecaser_apply_file(const cf_truecaser* model, const char* in,
                                         const char* out, uint64_t* lines);
CF_API void cf_truecaser_free(cf_truecaser* model);

/* ---- Filtering ---- */

typedef struct cf_filter_options {
  const char* config_json;  /* filter settings as a JSON object, or NULL */
  const char* src_lang;     /* overrides expected_src_lang when set */
  const char* tgt_lang;
  const char* const* langid_langs; /* language-id seed text per language */
  const char* const* langid_paths;
  size_t langid_count;
  const char* lexicon;
  const char* rejected_out; /* `line<TAB>rule<TAB>original line` */
  const char* report_out;
  unsigned threads;
} cf_filter_options;

CF_API void cf_filter_options_init(cf_filter_options* options);
/* report_json may be NULL. */
CF_API cf_status cf_filter_file(const char* in, const char* out,
                                const cf_filter_options* options, char** report_json);

/* ---- N-gram language models ---- */

typedef struct cf_lm cf_lm;

CF_API cf_status cf_lm_train_file(const char* in, int order, int min_count, cf_side side,
                                  cf_lm** out);
CF_API cf_status cf_lm_load_arpa(const char* path, cf_lm** out);
CF_API cf_status cf_lm_save_arpa(const cf_lm* model, const char* path);
CF_API int cf_lm_order(const cf_lm* model);
/* Per-token cross-entropy in nats of a space-tokenized sentence. */
CF_API cf_status cf_lm_cross_entropy(const cf_lm* model, const char* tokens, double* out);
/* Writes `id<TAB>cross-entropy`; perplexity may be NULL. */
CF_API cf_status cf_lm_score_file(const cf_lm* model, const char* in, cf_side side,
                                  const char* scores_out, unsigned threads, double* perplexity);
CF_API void cf_lm_free(cf_lm* model);

/* ---- Selection ---- */

typedef struct cf_dccef_result {
  double dual;
  double dom_weight; /* 1 when has_dom_weight is 0 */
  int has_dom_weight;
  double final_score;
} cf_dccef_result;

/* h_in and h_out may both be NULL for the unweighted score. */
CF_API cf_status cf_dccef_score(double h_fwd, double h_bwd, const double* h_in,
                                const double* h_out, cf_dccef_result* out);

typedef struct cf_dccef_options {
  const char* fwd_scores; /* `id<TAB>h_fwd` */
  const char* bwd_scores;
  const char* in_lm;      /* both LMs enable domain weighting */
  const char* out_lm;
  cf_side domain_side;    /* default target */
  double keep_fraction;   /* used when in (0, 1]; default 1 */
  double threshold;       /* used instead when >= 0; default -1 */
  const char* scores_out;
  unsigned threads;
} cf_dccef_options;

CF_API void cf_dccef_options_init(cf_dccef_options* options);
CF_API cf_status cf_dccef_file(const char* corpus, const cf_dccef_options* options,
                               const char* out, uint64_t* kept);

typedef enum cf_select_strategy {
  CF_SELECT_COMBINED = 0,      /* keep h_out - h_in >= threshold */
  CF_SELECT_IN_DOMAIN_TOP = 1  /* keep the top_n lowest h_in */
} cf_select_strategy;

typedef struct cf_select_options {
  cf_select_strategy strategy;
  double threshold; /* default 0 */
  uint64_t top_n;
  cf_side side;
  const char* scores_out; /* `id<TAB>h_in<TAB>h_out<TAB>combined` */
  unsigned threads;
} cf_select_options;

CF_API void cf_select_options_init(cf_select_options* options);
/* truncated is set when top_n exceeded the input size. */
CF_API cf_status cf_select_mono_file(const char* in, const char* lm_in, const char* lm_out,
                                     const char* out, const cf_select_options* options,
                                     uint64_t* input, uint64_t* kept, int* truncated);

typedef struct cf_mix_options {
  const char* strategy; /* original_ratio, upsampled_1_1 or cutoff */
  const char* ratio;    /* a:b, for cutoff */
  uint64_t seed;
  const char* synthetic_scores; /* required for cutoff; higher is better */
} cf_mix_options;

CF_API void cf_mix_options_init(cf_mix_options* options);
CF_API cf_status cf_mix_file(const char* bitext, const char* synthetic,
                             const cf_mix_options* options, const char* out,
                             uint64_t* bitext_lines, uint64_t* synthetic_lines);

/* ---- Subwords and augmentation ---- */

typedef struct cf_bpe cf_bpe;

CF_API cf_status cf_bpe_train_file(const char* in, size_t num_merges, const char* boundaries,
                                   int min_frequency, cf_bpe** out);
CF_API cf_status cf_bpe_load(const char* codes, const char* boundaries, cf_bpe** out);
CF_API cf_status cf_bpe_save(const cf_bpe* model, const char* codes);
CF_API size_t cf_bpe_merge_count(const cf_bpe* model);
CF_API cf_status cf_bpe_apply(const cf_bpe* model, const char* tokens, char** out);
CF_API cf_status cf_bpe_apply_file(const cf_bpe* model, const char* in, const char* out,
                                   unsigned threads, uint64_t* lines);
CF_API void cf_bpe_free(cf_bpe* model);
CF_API cf_status cf_bpe_undo(const char* subwords, char** out);
CF_API cf_status cf_bpe_undo_file(const char* in, const char* out, uint64_t* lines);

typedef struct cf_augment_options {
  int k_min;              /* default 1 */
  int k_max;              /* default 3 */
  const char* unk_token;  /* default <unk> */
  int output_ratio;       /* default 1 */
  uint64_t seed;
  const char* src_stopwords; /* word lists, whitespace separated */
  const char* tgt_stopwords;
  int combined;           /* write input + synthetic; default 1 */
  unsigned threads;
} cf_augment_options;

CF_API void cf_augment_options_init(cf_augment_options* options);
CF_API cf_status cf_augment_unk_file(const char* in, const char* out,
                                     const cf_augment_options* options, uint64_t* synthetic,
                                     uint64_t* skipped);

/* ---- Re-ranking ---- */

typedef struct cf_rerank_options {
  int n;        /* default 12 */
  double w_l2r; /* default 1 */
  double w_r2l; /* default 1 */
  const char* sorted_out; /* full re-sorted lists */
} cf_rerank_options;

CF_API void cf_rerank_options_init(cf_rerank_options* options);
/* r2l may be NULL only when w_r2l is 0. */
CF_API cf_status cf_rerank_file(const char* nbest, const char* r2l,
                                const cf_rerank_options* options, const char* out,
                                uint64_t* sentences);

/* ---- Optimizers ---- */

typedef struct cf_optim_config {
  const char* kind; /* adam or qhadam */
  double lr0;
  int64_t warmup;
  double beta1;
  double beta2;
  double eps;
  double nu1;
  double nu2;
} cf_optim_config;

CF_API void cf_optim_config_init(cf_optim_config* config);
CF_API cf_status cf_optim_lr_at(int64_t step, const cf_optim_config* config, double* out);
/* Problems: quadratic, sphere, rosenbrock. report_json is a trial report. */
CF_API cf_status cf_optim_bench(const char* problem, const cf_optim_config* config,
                                int64_t steps, uint64_t seed, double grad_noise,
                                char** report_json);

/* ---- Pipeline ---- */

CF_API cf_status cf_pipeline_run(const char* config_path, char** summary_json);
/* Accepts a stage manifest or a run summary. table_text may be NULL. */
CF_API cf_status cf_stats(const char* path, char** report_json, char** table_text);

#ifdef __cplusplus
}
#endif

#endif /* CORPUSFORGE_H_ */
