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

#include "corpusforge/corpusforge.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "corpusforge/bpe.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/lm.hpp"
#include "corpusforge/ops.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/pipeline.hpp"
#include "corpusforge/textnorm.hpp"

namespace cf = corpusforge;
namespace fs = std::filesystem;

struct cf_truecaser {
  cf::textnorm::TruecaseModel model;
};

struct cf_lm {
  cf::lm::NGramModel model;
};

struct cf_bpe {
  cf::bpe::MergeTable table;
  std::optional<cf::bpe::BoundarySet> boundaries;
};

namespace {

thread_local std::string last_error;

template <typename Fn>
cf_status guard(Fn&& fn) noexcept {
  last_error.clear();
  try {
    fn();
    return CF_OK;
  } catch (const cf::Error& e) {
    last_error = e.what();
    return static_cast<cf_status>(static_cast<int>(e.kind()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return CF_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  if (p == nullptr) throw cf::ConfigError(std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

void put(char** out, const std::string& s) {
  need(out, "output pointer");
  *out = dup(s);
}

template <typename T>
void set(T* out, T value) {
  if (out != nullptr) *out = value;
}

std::optional<fs::path> opt_path(const char* p) {
  if (p == nullptr || *p == '\0') return std::nullopt;
  return fs::path(p);
}

std::optional<cf::ops::Side> to_side(cf_side side) {
  switch (side) {
    case CF_SIDE_NONE: return std::nullopt;
    case CF_SIDE_SRC: return cf::ops::Side::kSrc;
    case CF_SIDE_TGT: return cf::ops::Side::kTgt;
  }
  throw cf::ConfigError("invalid side");
}

cf::optim::OptimizerConfig to_config(const cf_optim_config* c) {
  need(c, "optimizer config");
  cf::optim::OptimizerConfig o;
  o.kind = cf::optim::kind_from_string(c->kind ? c->kind : "adam");
  o.lr0 = c->lr0;
  o.warmup = c->warmup;
  o.beta1 = c->beta1;
  o.beta2 = c->beta2;
  o.eps = c->eps;
  o.nu1 = c->nu1;
  o.nu2 = c->nu2;
  o.validate();
  return o;
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "0.1.0"; }

const char* cf_last_error(void) { return last_error.c_str(); }

void cf_free(void* ptr) { std::free(ptr); }

cf_status cf_text_normalize(const char* text, char** out) {
  return guard([&] {
    need(text, "text");
    put(out, cf::textnorm::normalize(text));
  });
}

cf_status cf_text_tokenize(const char* text, char** out) {
  return guard([&] {
    need(text, "text");
    put(out, cf::textnorm::join_tokens(cf::textnorm::tokenize(text)));
  });
}

cf_status cf_text_detokenize(const char* tokens, char** out) {
  return guard([&] {
    need(tokens, "tokens");
    put(out, cf::textnorm::detokenize(cf::textnorm::split_tokens(tokens)));
  });
}

cf_status cf_text_mask(const char* text, char** masked, char** map_json) {
  return guard([&] {
    need(text, "text");
    need(masked, "output pointer");
    need(map_json, "output pointer");
    auto m = cf::textnorm::mask_placeholders(text);
    char* a = dup(m.text);
    try {
      *map_json = dup(m.map.to_json().dump());
    } catch (...) {
      std::free(a);
      throw;
    }
    *masked = a;
  });
}

cf_status cf_text_unmask(const char* text, const char* map_json, char** out) {
  return guard([&] {
    need(text, "text");
    need(map_json, "map");
    auto j = nlohmann::json::parse(map_json, nullptr, false);
    if (j.is_discarded()) throw cf::DataError("placeholder map is not JSON");
    put(out, cf::textnorm::unmask(text, cf::textnorm::PlaceholderMap::from_json(j)).text);
  });
}

void cf_normalize_options_init(cf_normalize_options* o) {
  if (o == nullptr) return;
  o->tokenize = 1;
  o->protect_placeholders = 1;
  o->threads = 1;
}

cf_status cf_normalize_file(const char* in, const char* out, const cf_normalize_options* o,
                            uint64_t* lines) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    cf::ops::NormalizeOptions opts;
    if (o != nullptr) {
      opts.tokenize = o->tokenize != 0;
      opts.protect_placeholders = o->protect_placeholders != 0;
      opts.threads = o->threads == 0 ? 1 : o->threads;
    }
    set(lines, cf::ops::normalize_file(in, out, opts));
  });
}

cf_status cf_mask_file(const char* in, const char* out, const char* map_out, uint64_t* lines) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    need(map_out, "map path");
    set(lines, cf::ops::mask_file(in, out, map_out));
  });
}

cf_status cf_unmask_file(const char* in, const char* map_in, const char* out, uint64_t* lines) {
  return guard([&] {
    need(in, "input path");
    need(map_in, "map path");
    need(out, "output path");
    set(lines, cf::ops::unmask_file(in, map_in, out));
  });
}

cf_status cf_tokenize_file(const char* in, const char* out, unsigned threads, uint64_t* lines) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    set(lines, cf::ops::tokenize_file(in, out, threads == 0 ? 1 : threads));
  });
}

cf_status cf_detokenize_file(const char* in, const char* out, uint64_t* lines) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    set(lines, cf::ops::detokenize_file(in, out));
  });
}

cf_status cf_shuffle_file(const char* in, const char* out, uint64_t seed) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    cf::shuffle_file(in, out, seed);
  });
}

cf_status cf_shard_file(const char* in, const char* prefix, size_t k) {
  return guard([&] {
    need(in, "input path");
    need(prefix, "prefix");
    cf::shard_file(in, prefix, k);
  });
}

cf_status cf_merge_files(const char* const* shards, size_t count, const char* out,
                         int interleave) {
  return guard([&] {
    need(out, "output path");
    if (count > 0) need(shards, "shard list");
    std::vector<fs::path> paths;
    for (size_t i = 0; i < count; ++i) {
      need(shards[i], "shard path");
      paths.emplace_back(shards[i]);
    }
    cf::merge_files(paths, out, interleave != 0);
  });
}

cf_status cf_dedupe_file(const char* in, const char* out, uint64_t* kept, uint64_t* removed) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    std::uint64_t r = 0;
    set(kept, cf::ops::dedupe_file(in, out, &r));
    set(removed, r);
  });
}

cf_status cf_truecaser_train_file(const char* in, cf_side side, cf_truecaser** out) {
  return guard([&] {
    need(in, "input path");
    need(out, "output pointer");
    auto tc = std::make_unique<cf_truecaser>();
    tc->model = cf::textnorm::TruecaseModel::train(cf::ops::read_sentences(in, to_side(side)));
    *out = tc.release();
  });
}

cf_status cf_truecaser_load(const char* path, cf_truecaser** out) {
  return guard([&] {
    need(path, "model path");
    need(out, "output pointer");
    auto tc = std::make_unique<cf_truecaser>();
    tc->model = cf::textnorm::TruecaseModel::load(path);
    *out = tc.release();
  });
}

cf_status cf_truecaser_save(const cf_truecaser* model, const char* path) {
  return guard([&] {
    need(model, "model");
    need(path, "model path");
    model->model.save(path);
  });
}

cf_status cf_truecaser_apply(const cf_truecaser* model, const char* tokens, char** out) {
  return guard([&] {
    need(model, "model");
    need(tokens, "tokens");
    const auto t = cf::textnorm::split_tokens(tokens);
    put(out, cf::textnorm::join_tokens(model->model.apply(t)));
  });
}

cf_status cf_truecaser_apply_file(const cf_truecaser* model, const char* in, const char* out,
                                  uint64_t* lines) {
  return guard([&] {
    need(model, "model");
    need(in, "input path");
    need(out, "output path");
    const auto input = cf::read_lines(in);
    std::vector<std::string> result;
    result.reserve(input.size());
    for (const auto& line : input) {
      std::string row;
      std::size_t start = 0;
      for (;;) {
        const auto tab = line.find('\t', start);
        const auto field = line.substr(start, tab == std::string::npos ? tab : tab - start);
        const auto t = cf::textnorm::split_tokens(field);
        row += cf::textnorm::join_tokens(model->model.apply(t));
        if (tab == std::string::npos) break;
        row += '\t';
        start = tab + 1;
      }
      result.push_back(std::move(row));
    }
    cf::write_lines(result, out);
    set(lines, static_cast<uint64_t>(result.size()));
  });
}

void cf_truecaser_free(cf_truecaser* model) { delete model; }

void cf_filter_options_init(cf_filter_options* o) {
  if (o == nullptr) return;
  std::memset(o, 0, sizeof *o);
  o->threads = 1;
}

cf_status cf_filter_file(const char* in, const char* out, const cf_filter_options* o,
                         char** report_json) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    cf::ops::FilterFileOptions opts;
    if (o != nullptr) {
      if (o->config_json != nullptr && *o->config_json != '\0') {
        auto j = nlohmann::json::parse(o->config_json, nullptr, false);
        if (j.is_discarded()) throw cf::ConfigError("filter config is not valid JSON");
        opts.config = cf::filters::FilterConfig::from_json(j);
      }
      if (o->src_lang != nullptr) opts.config.expected_src_lang = o->src_lang;
      if (o->tgt_lang != nullptr) opts.config.expected_tgt_lang = o->tgt_lang;
      if (o->langid_count > 0) {
        need(o->langid_langs, "language list");
        need(o->langid_paths, "seed path list");
      }
      for (size_t i = 0; i < o->langid_count; ++i) {
        need(o->langid_langs[i], "language");
        need(o->langid_paths[i], "seed path");
        opts.langid_seeds[o->langid_langs[i]] = o->langid_paths[i];
      }
      opts.lexicon = opt_path(o->lexicon);
      opts.rejected_out = opt_path(o->rejected_out);
      opts.report_out = opt_path(o->report_out);
      opts.threads = o->threads == 0 ? 1 : o->threads;
    }
    const auto report = cf::ops::filter_file(in, out, opts);
    if (report_json != nullptr) *report_json = dup(report.to_json().dump());
  });
}

cf_status cf_lm_train_file(const char* in, int order, int min_count, cf_side side,
                           cf_lm** out) {
  return guard([&] {
    need(in, "input path");
    need(out, "output pointer");
    auto m = std::make_unique<cf_lm>();
    m->model = cf::lm::NGramModel::train(cf::ops::read_sentences(in, to_side(side)), order,
                                         min_count);
    *out = m.release();
  });
}

cf_status cf_lm_load_arpa(const char* path, cf_lm** out) {
  return guard([&] {
    need(path, "model path");
    need(out, "output pointer");
    auto m = std::make_unique<cf_lm>();
    m->model = cf::lm::NGramModel::load_arpa(path);
    *out = m.release();
  });
}

cf_status cf_lm_save_arpa(const cf_lm* model, const char* path) {
  return guard([&] {
    need(model, "model");
    need(path, "model path");
    model->model.save_arpa(path);
  });
}

int cf_lm_order(const cf_lm* model) { return model == nullptr ? 0 : model->model.order(); }

cf_status cf_lm_cross_entropy(const cf_lm* model, const char* tokens, double* out) {
  return guard([&] {
    need(model, "model");
    need(tokens, "tokens");
    need(out, "output pointer");
    const auto t = cf::textnorm::split_tokens(tokens);
    *out = cf::lm::cross_entropy(t, model->model);
  });
}

cf_status cf_lm_score_file(const cf_lm* model, const char* in, cf_side side,
                           const char* scores_out, unsigned threads, double* perplexity) {
  return guard([&] {
    need(model, "model");
    need(in, "input path");
    need(scores_out, "scores path");
    const auto sentences = cf::ops::read_sentences(in, to_side(side));
    std::vector<double> h(sentences.size());
    cf::parallel_for(sentences.size(), threads == 0 ? 1 : threads, [&](std::size_t i) {
      h[i] = cf::lm::cross_entropy(sentences[i], model->model);
    });
    cf::write_scores(h, scores_out);
    set(perplexity, cf::lm::perplexity(sentences, model->model));
  });
}

void cf_lm_free(cf_lm* model) { delete model; }

cf_status cf_dccef_score(double h_fwd, double h_bwd, const double* h_in, const double* h_out,
                         cf_dccef_result* out) {
  return guard([&] {
    need(out, "output pointer");
    if ((h_in == nullptr) != (h_out == nullptr)) {
      throw cf::ConfigError("h_in and h_out must be given together");
    }
    std::optional<double> in, o;
    if (h_in != nullptr) {
      in = *h_in;
      o = *h_out;
    }
    const auto s = cf::select::dccef_score(h_fwd, h_bwd, in, o);
    out->dual = s.dual;
    out->has_dom_weight = s.dom_weight.has_value() ? 1 : 0;
    out->dom_weight = s.dom_weight.value_or(1.0);
    out->final_score = s.final_score;
  });
}

void cf_dccef_options_init(cf_dccef_options* o) {
  if (o == nullptr) return;
  std::memset(o, 0, sizeof *o);
  o->domain_side = CF_SIDE_TGT;
  o->keep_fraction = 1.0;
  o->threshold = -1.0;
  o->threads = 1;
}

cf_status cf_dccef_file(const char* corpus, const cf_dccef_options* o, const char* out,
                        uint64_t* kept) {
  return guard([&] {
    need(corpus, "corpus path");
    need(o, "options");
    need(o->fwd_scores, "forward score path");
    need(o->bwd_scores, "backward score path");
    need(out, "output path");
    cf::ops::DccefFileOptions opts;
    opts.corpus = corpus;
    opts.fwd_scores = o->fwd_scores;
    opts.bwd_scores = o->bwd_scores;
    opts.in_lm = opt_path(o->in_lm);
    opts.out_lm = opt_path(o->out_lm);
    opts.domain_side = o->domain_side == CF_SIDE_SRC ? cf::ops::Side::kSrc : cf::ops::Side::kTgt;
    if (o->threshold >= 0.0) {
      opts.keep = cf::select::KeepThreshold{o->threshold};
    } else {
      opts.keep = cf::select::KeepFraction{o->keep_fraction};
    }
    opts.scores_out = opt_path(o->scores_out);
    opts.threads = o->threads == 0 ? 1 : o->threads;
    set(kept, cf::ops::dccef_file(opts, out));
  });
}

void cf_select_options_init(cf_select_options* o) {
  if (o == nullptr) return;
  std::memset(o, 0, sizeof *o);
  o->strategy = CF_SELECT_COMBINED;
  o->threads = 1;
}

cf_status cf_select_mono_file(const char* in, const char* lm_in, const char* lm_out,
                              const char* out, const cf_select_options* o, uint64_t* input,
                              uint64_t* kept, int* truncated) {
  return guard([&] {
    need(in, "input path");
    need(lm_in, "in-domain LM path");
    need(lm_out, "out-of-domain LM path");
    need(out, "output path");
    need(o, "options");
    cf::ops::SelectMonoOptions opts;
    if (o->strategy == CF_SELECT_COMBINED) {
      opts.strategy = cf::select::CombinedThreshold{o->threshold};
    } else if (o->strategy == CF_SELECT_IN_DOMAIN_TOP) {
      opts.strategy = cf::select::InDomainTop{static_cast<std::size_t>(o->top_n)};
    } else {
      throw cf::ConfigError("invalid selection strategy");
    }
    opts.side = to_side(o->side);
    opts.scores_out = opt_path(o->scores_out);
    opts.threads = o->threads == 0 ? 1 : o->threads;
    const auto r = cf::ops::select_mono_file(in, lm_in, lm_out, out, opts);
    set(input, r.input);
    set(kept, r.kept);
    set(truncated, r.truncated_request ? 1 : 0);
  });
}

void cf_mix_options_init(cf_mix_options* o) {
  if (o == nullptr) return;
  o->strategy = "original_ratio";
  o->ratio = "1:1";
  o->seed = 1;
  o->synthetic_scores = nullptr;
}

cf_status cf_mix_file(const char* bitext, const char* synthetic, const cf_mix_options* o,
                      const char* out, uint64_t* bitext_lines, uint64_t* synthetic_lines) {
  return guard([&] {
    need(bitext, "bitext path");
    need(synthetic, "synthetic path");
    need(o, "options");
    need(out, "output path");
    cf::select::MixtureSpec spec;
    spec.strategy = cf::select::mix_strategy_from_string(o->strategy ? o->strategy : "");
    const auto [a, b] = cf::select::parse_ratio(o->ratio ? o->ratio : "1:1");
    spec.bitext_parts = a;
    spec.synthetic_parts = b;
    spec.seed = o->seed;
    const auto mix = cf::ops::mix_file(bitext, synthetic, spec, opt_path(o->synthetic_scores), out);
    set(bitext_lines, mix.bitext_lines);
    set(synthetic_lines, mix.synthetic_lines);
  });
}

cf_status cf_bpe_train_file(const char* in, size_t num_merges, const char* boundaries,
                            int min_frequency, cf_bpe** out) {
  return guard([&] {
    need(in, "input path");
    need(out, "output pointer");
    auto m = std::make_unique<cf_bpe>();
    if (auto p = opt_path(boundaries)) m->boundaries = cf::bpe::BoundarySet::load(p->string());
    std::map<std::string, std::uint64_t> counts;
    for (const auto& line : cf::read_lines(in)) {
      std::string spaced = line;
      for (char& c : spaced) {
        if (c == '\t') c = ' ';
      }
      for (auto& tok : cf::textnorm::split_tokens(spaced)) ++counts[tok];
    }
    m->table = cf::bpe::train(counts, num_merges, m->boundaries ? &*m->boundaries : nullptr,
                              min_frequency);
    *out = m.release();
  });
}

cf_status cf_bpe_load(const char* codes, const char* boundaries, cf_bpe** out) {
  return guard([&] {
    need(codes, "codes path");
    need(out, "output pointer");
    auto m = std::make_unique<cf_bpe>();
    m->table = cf::bpe::MergeTable::load(codes);
    if (auto p = opt_path(boundaries)) m->boundaries = cf::bpe::BoundarySet::load(p->string());
    *out = m.release();
  });
}

cf_status cf_bpe_save(const cf_bpe* model, const char* codes) {
  return guard([&] {
    need(model, "model");
    need(codes, "codes path");
    model->table.save(codes);
  });
}

size_t cf_bpe_merge_count(const cf_bpe* model) {
  return model == nullptr ? 0 : model->table.size();
}

cf_status cf_bpe_apply(const cf_bpe* model, const char* tokens, char** out) {
  return guard([&] {
    need(model, "model");
    need(tokens, "tokens");
    cf::bpe::Segmenter seg(model->table, model->boundaries ? &*model->boundaries : nullptr);
    put(out, seg.apply_line(tokens));
  });
}

cf_status cf_bpe_apply_file(const cf_bpe* model, const char* in, const char* out,
                            unsigned threads, uint64_t* lines) {
  return guard([&] {
    need(model, "model");
    need(in, "input path");
    need(out, "output path");
    const auto input = cf::read_lines(in);
    std::vector<std::string> result(input.size());
    const auto* bounds = model->boundaries ? &*model->boundaries : nullptr;
    cf::parallel_chunks(input.size(), threads == 0 ? 1 : threads,
                        [&](std::size_t begin, std::size_t end) {
                          cf::bpe::Segmenter seg(model->table, bounds);
                          for (std::size_t i = begin; i < end; ++i) {
                            std::string row;
                            std::size_t start = 0;
                            const auto& line = input[i];
                            for (;;) {
                              const auto tab = line.find('\t', start);
                              row += seg.apply_line(line.substr(
                                  start, tab == std::string::npos ? tab : tab - start));
                              if (tab == std::string::npos) break;
                              row += '\t';
                              start = tab + 1;
                            }
                            result[i] = std::move(row);
                          }
                        });
    cf::write_lines(result, out);
    set(lines, static_cast<uint64_t>(result.size()));
  });
}

void cf_bpe_free(cf_bpe* model) { delete model; }

cf_status cf_bpe_undo(const char* subwords, char** out) {
  return guard([&] {
    need(subwords, "subwords");
    put(out, cf::bpe::undo_line(subwords));
  });
}

cf_status cf_bpe_undo_file(const char* in, const char* out, uint64_t* lines) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    set(lines, cf::ops::bpe_undo_file(in, out));
  });
}

void cf_augment_options_init(cf_augment_options* o) {
  if (o == nullptr) return;
  std::memset(o, 0, sizeof *o);
  o->k_min = 1;
  o->k_max = 3;
  o->unk_token = "<unk>";
  o->output_ratio = 1;
  o->seed = 1;
  o->combined = 1;
  o->threads = 1;
}

cf_status cf_augment_unk_file(const char* in, const char* out, const cf_augment_options* o,
                              uint64_t* synthetic, uint64_t* skipped) {
  return guard([&] {
    need(in, "input path");
    need(out, "output path");
    need(o, "options");
    cf::augment::AugmentConfig c;
    c.k_min = o->k_min;
    c.k_max = o->k_max;
    c.unk_token = o->unk_token ? o->unk_token : "";
    c.output_ratio = o->output_ratio;
    c.seed = o->seed;
    if (auto p = opt_path(o->src_stopwords)) c.src_stopwords = cf::augment::load_stopwords(p->string());
    if (auto p = opt_path(o->tgt_stopwords)) c.tgt_stopwords = cf::augment::load_stopwords(p->string());
    const auto r = cf::ops::augment_file(in, out, c, o->combined != 0,
                                         o->threads == 0 ? 1 : o->threads);
    set(synthetic, r.synthetic);
    set(skipped, r.skipped);
  });
}

void cf_rerank_options_init(cf_rerank_options* o) {
  if (o == nullptr) return;
  o->n = 12;
  o->w_l2r = 1.0;
  o->w_r2l = 1.0;
  o->sorted_out = nullptr;
}

cf_status cf_rerank_file(const char* nbest, const char* r2l, const cf_rerank_options* o,
                         const char* out, uint64_t* sentences) {
  return guard([&] {
    need(nbest, "n-best path");
    need(o, "options");
    need(out, "output path");
    cf::rerank::RerankConfig c;
    c.n = o->n;
    c.w_l2r = o->w_l2r;
    c.w_r2l = o->w_r2l;
    set(sentences, cf::ops::rerank_file(nbest, opt_path(r2l), c, out, opt_path(o->sorted_out)));
  });
}

void cf_optim_config_init(cf_optim_config* c) {
  if (c == nullptr) return;
  const cf::optim::OptimizerConfig d;
  c->kind = "adam";
  c->lr0 = d.lr0;
  c->warmup = d.warmup;
  c->beta1 = d.beta1;
  c->beta2 = d.beta2;
  c->eps = d.eps;
  c->nu1 = d.nu1;
  c->nu2 = d.nu2;
}

cf_status cf_optim_lr_at(int64_t step, const cf_optim_config* config, double* out) {
  return guard([&] {
    need(out, "output pointer");
    *out = cf::optim::lr_at(step, to_config(config));
  });
}

cf_status cf_optim_bench(const char* problem, const cf_optim_config* config, int64_t steps,
                         uint64_t seed, double grad_noise, char** report_json) {
  return guard([&] {
    need(problem, "problem");
    cf::ops::BenchOptions b;
    b.problem = problem;
    b.config = to_config(config);
    b.trial.steps = steps;
    b.trial.seed = seed;
    b.trial.grad_noise = grad_noise;
    if (!(grad_noise >= 0.0)) throw cf::ConfigError("gradient noise must be non-negative");
    put(report_json, cf::ops::optim_bench(b).dump());
  });
}

cf_status cf_pipeline_run(const char* config_path, char** summary_json) {
  return guard([&] {
    need(config_path, "config path");
    const auto config = cf::pipeline::PipelineConfig::load(config_path);
    const auto result = cf::pipeline::run_pipeline(config);
    if (summary_json != nullptr) *summary_json = dup(result.summary.dump(2));
  });
}

cf_status cf_stats(const char* path, char** report_json, char** table_text) {
  return guard([&] {
    need(path, "manifest path");
    const auto report = cf::ops::stats(path);
    if (report_json != nullptr) *report_json = dup(report.dump(2));
    if (table_text != nullptr) *table_text = dup(cf::ops::format_stats(report));
  });
}

}  // extern "C"
