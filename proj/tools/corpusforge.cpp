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

// corpusforge command-line driver. Exit codes: 0 success, 2 configuration
// or usage error, 3 data error, 4 I/O error, 1 internal error.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corpusforge/corpusforge.h"
#include "json.hpp"

namespace {

int fail(cf_status s) {
  std::cerr << "corpusforge: error: " << cf_last_error() << '\n';
  return static_cast<int>(s);
}

int usage_error(const std::string& msg) {
  std::cerr << "corpusforge: error: " << msg << '\n';
  return CF_ERR_CONFIG;
}

// Owns a library-allocated string.
struct CfString {
  char* p = nullptr;
  ~CfString() { cf_free(p); }
  std::string str() const { return p ? p : ""; }
};

unsigned default_threads() {
  if (const char* t = std::getenv("CORPUSFORGE_THREADS"); t != nullptr && *t != '\0') {
    char* end = nullptr;
    const long v = std::strtol(t, &end, 10);
    if (*end == '\0' && v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  return 1;
}

cf_side parse_side(const std::string& s) {
  if (s.empty()) return CF_SIDE_NONE;
  return s == "src" ? CF_SIDE_SRC : CF_SIDE_TGT;
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct Command {
  CLI::App* app;
  std::function<int()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpusforge: parallel corpus cleaning, selection and segmentation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cf_version()));
  std::vector<Command> commands;
  const auto sides = CLI::IsMember({"src", "tgt"});
  std::string in, out, model, map_path, side;
  unsigned threads = default_threads();

  auto io = [&](CLI::App* sub) {
    sub->add_option("-i,--input", in, "Input file")->required();
    sub->add_option("-o,--output", out, "Output file")->required();
  };
  auto with_threads = [&](CLI::App* sub) {
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  };

  // normalize
  {
    auto* sub = app.add_subcommand("normalize", "Normalize, and by default tokenize, text");
    io(sub);
    with_threads(sub);
    static bool no_tokenize = false, no_protect = false;
    sub->add_flag("--no-tokenize", no_tokenize, "Only normalize characters and whitespace");
    sub->add_flag("--no-protect", no_protect, "Tokenize URLs, emails and tags like text");
    commands.push_back({sub, [&] {
      cf_normalize_options o;
      cf_normalize_options_init(&o);
      o.tokenize = no_tokenize ? 0 : 1;
      o.protect_placeholders = no_protect ? 0 : 1;
      o.threads = threads;
      uint64_t n = 0;
      if (auto s = cf_normalize_file(in.c_str(), out.c_str(), &o, &n)) return fail(s);
      std::cerr << n << " lines\n";
      return 0;
    }});
  }
  // mask / unmask
  {
    auto* sub = app.add_subcommand("mask", "Replace URLs, emails and tags with placeholders");
    io(sub);
    sub->add_option("--map", map_path, "Placeholder map (JSON lines)")->required();
    commands.push_back({sub, [&] {
      if (auto s = cf_mask_file(in.c_str(), out.c_str(), map_path.c_str(), nullptr)) return fail(s);
      return 0;
    }});
    auto* un = app.add_subcommand("unmask", "Restore placeholders from a map");
    io(un);
    un->add_option("--map", map_path, "Placeholder map (JSON lines)")->required();
    commands.push_back({un, [&] {
      if (auto s = cf_unmask_file(in.c_str(), map_path.c_str(), out.c_str(), nullptr)) return fail(s);
      return 0;
    }});
  }
  // tokenize / detokenize
  {
    auto* sub = app.add_subcommand("tokenize", "Split punctuation from words");
    io(sub);
    with_threads(sub);
    commands.push_back({sub, [&] {
      if (auto s = cf_tokenize_file(in.c_str(), out.c_str(), threads, nullptr)) return fail(s);
      return 0;
    }});
    auto* de = app.add_subcommand("detokenize", "Rejoin tokenized text");
    io(de);
    commands.push_back({de, [&] {
      if (auto s = cf_detokenize_file(in.c_str(), out.c_str(), nullptr)) return fail(s);
      return 0;
    }});
  }
  // truecasing
  {
    auto* sub = app.add_subcommand("truecase-train", "Learn a truecasing model");
    sub->add_option("-i,--input", in, "Tokenized text")->required();
    sub->add_option("-m,--model", model, "Model output")->required();
    sub->add_option("--side", side, "Field of a parallel file")->check(sides);
    commands.push_back({sub, [&] {
      cf_truecaser* tc = nullptr;
      if (auto s = cf_truecaser_train_file(in.c_str(), parse_side(side), &tc)) return fail(s);
      const auto s = cf_truecaser_save(tc, model.c_str());
      cf_truecaser_free(tc);
      return s ? fail(s) : 0;
    }});
    auto* ap = app.add_subcommand("truecase-apply", "Apply a truecasing model");
    io(ap);
    ap->add_option("-m,--model", model, "Model file")->required();
    commands.push_back({ap, [&] {
      cf_truecaser* tc = nullptr;
      if (auto s = cf_truecaser_load(model.c_str(), &tc)) return fail(s);
      const auto s = cf_truecaser_apply_file(tc, in.c_str(), out.c_str(), nullptr);
      cf_truecaser_free(tc);
      return s ? fail(s) : 0;
    }});
  }
  // filter / dedupe
  {
    auto* sub = app.add_subcommand("filter", "Apply pair filters to a parallel corpus");
    io(sub);
    with_threads(sub);
    static std::string config, lexicon, src_lang, tgt_lang, rejected, report;
    static std::vector<std::string> langid;
    sub->add_option("--config", config, "Filter settings (JSON)");
    sub->add_option("--lexicon", lexicon, "Bilingual lexicon");
    sub->add_option("--src-lang", src_lang, "Expected source language");
    sub->add_option("--tgt-lang", tgt_lang, "Expected target language");
    sub->add_option("--langid", langid, "Language-id seed text as lang=path");
    sub->add_option("--rejected", rejected, "Write rejected lines here");
    sub->add_option("--report", report, "Write the JSON report here");
    commands.push_back({sub, [&] {
      std::string config_json;
      if (!config.empty()) {
        auto text = read_file(config);
        if (!text) {
          std::cerr << "corpusforge: error: cannot open config " << config << '\n';
          return static_cast<int>(CF_ERR_IO);
        }
        auto j = nlohmann::json::parse(*text, nullptr, false);
        if (j.is_discarded()) return usage_error("config is not valid JSON");
        if (j.is_object() && j.contains("filter") && j["filter"].is_object()) j = j["filter"];
        config_json = j.dump();
      }
      std::vector<std::string> langs, paths;
      for (const auto& item : langid) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) return usage_error("--langid expects lang=path");
        langs.push_back(item.substr(0, eq));
        paths.push_back(item.substr(eq + 1));
      }
      std::vector<const char*> lang_ptrs, path_ptrs;
      for (std::size_t i = 0; i < langs.size(); ++i) {
        lang_ptrs.push_back(langs[i].c_str());
        path_ptrs.push_back(paths[i].c_str());
      }
      cf_filter_options o;
      cf_filter_options_init(&o);
      o.config_json = opt(config_json);
      o.src_lang = opt(src_lang);
      o.tgt_lang = opt(tgt_lang);
      o.langid_langs = lang_ptrs.data();
      o.langid_paths = path_ptrs.data();
      o.langid_count = langs.size();
      o.lexicon = opt(lexicon);
      o.rejected_out = opt(rejected);
      o.report_out = opt(report);
      o.threads = threads;
      CfString rep;
      if (auto s = cf_filter_file(in.c_str(), out.c_str(), &o, &rep.p)) return fail(s);
      std::cout << nlohmann::json::parse(rep.str()).dump(2) << '\n';
      return 0;
    }});
    auto* dd = app.add_subcommand("dedupe", "Drop exact duplicate pairs");
    io(dd);
    commands.push_back({dd, [&] {
      uint64_t kept = 0, removed = 0;
      if (auto s = cf_dedupe_file(in.c_str(), out.c_str(), &kept, &removed)) return fail(s);
      std::cerr << kept << " kept, " << removed << " removed\n";
      return 0;
    }});
  }
  // language models
  {
    auto* sub = app.add_subcommand("lm-train", "Train an n-gram LM and write ARPA");
    io(sub);
    static int order = 4, min_count = 1;
    sub->add_option("--order", order, "N-gram order")->check(CLI::Range(1, 5));
    sub->add_option("--min-count", min_count, "Map rarer tokens to <unk>")
        ->check(CLI::Range(1, 1 << 30));
    sub->add_option("--side", side, "Field of a parallel file")->check(sides);
    commands.push_back({sub, [&] {
      cf_lm* lm = nullptr;
      if (auto s = cf_lm_train_file(in.c_str(), order, min_count, parse_side(side), &lm)) {
        return fail(s);
      }
      const auto s = cf_lm_save_arpa(lm, out.c_str());
      cf_lm_free(lm);
      return s ? fail(s) : 0;
    }});
    auto* sc = app.add_subcommand("lm-score", "Per-sentence cross-entropy under an LM");
    io(sc);
    with_threads(sc);
    sc->add_option("-m,--model", model, "ARPA model")->required();
    sc->add_option("--side", side, "Field of a parallel file")->check(sides);
    commands.push_back({sc, [&] {
      cf_lm* lm = nullptr;
      if (auto s = cf_lm_load_arpa(model.c_str(), &lm)) return fail(s);
      double ppl = 0.0;
      const auto s = cf_lm_score_file(lm, in.c_str(), parse_side(side), out.c_str(), threads, &ppl);
      cf_lm_free(lm);
      if (s) return fail(s);
      std::cout << "perplexity " << ppl << '\n';
      return 0;
    }});
  }
  // dccef
  {
    auto* sub = app.add_subcommand("dccef", "Dual conditional cross-entropy filtering");
    static std::string corpus, fwd, bwd, in_lm, out_lm, scores, domain_side = "tgt";
    static double keep = -1.0, threshold = -1.0;
    sub->add_option("--corpus", corpus, "Parallel corpus")->required();
    sub->add_option("--fwd", fwd, "Forward scores, id<TAB>h")->required();
    sub->add_option("--bwd", bwd, "Backward scores, id<TAB>h")->required();
    sub->add_option("--in-lm", in_lm, "In-domain LM for domain weighting");
    sub->add_option("--out-lm", out_lm, "Out-of-domain LM for domain weighting");
    sub->add_option("--domain-side", domain_side, "Side scored by the domain LMs")->check(sides);
    auto* k = sub->add_option("--keep-fraction", keep, "Keep this fraction of best pairs");
    auto* t = sub->add_option("--threshold", threshold, "Keep pairs scoring at least this");
    k->excludes(t);
    sub->add_option("-o,--output", out, "Kept pairs")->required();
    sub->add_option("--scores", scores, "Write final scores here");
    with_threads(sub);
    commands.push_back({sub, [&] {
      if (keep < 0.0 && threshold < 0.0) {
        return usage_error("dccef needs --keep-fraction or --threshold");
      }
      cf_dccef_options o;
      cf_dccef_options_init(&o);
      o.fwd_scores = fwd.c_str();
      o.bwd_scores = bwd.c_str();
      o.in_lm = opt(in_lm);
      o.out_lm = opt(out_lm);
      o.domain_side = parse_side(domain_side);
      if (keep >= 0.0) o.keep_fraction = keep;
      if (threshold >= 0.0) o.threshold = threshold;
      o.scores_out = opt(scores);
      o.threads = threads;
      uint64_t kept = 0;
      if (auto s = cf_dccef_file(corpus.c_str(), &o, out.c_str(), &kept)) return fail(s);
      std::cerr << kept << " pairs kept\n";
      return 0;
    }});
  }
  // select-mono
  {
    auto* sub = app.add_subcommand("select-mono", "Cross-entropy difference selection");
    io(sub);
    with_threads(sub);
    static std::string in_lm, out_lm, scores;
    static double threshold = 0.0;
    static std::int64_t top = -1;
    sub->add_option("--in-lm", in_lm, "In-domain LM")->required();
    sub->add_option("--out-lm", out_lm, "Out-of-domain LM")->required();
    auto* th = sub->add_option("--threshold", threshold, "Keep h_out - h_in >= threshold");
    auto* tp = sub->add_option("--top", top, "Keep the N lowest in-domain cross-entropies");
    th->excludes(tp);
    sub->add_option("--side", side, "Field of a parallel file")->check(sides);
    sub->add_option("--scores", scores, "Write id, h_in, h_out, combined here");
    commands.push_back({sub, [&] {
      cf_select_options o;
      cf_select_options_init(&o);
      if (top >= 0) {
        o.strategy = CF_SELECT_IN_DOMAIN_TOP;
        o.top_n = static_cast<uint64_t>(top);
      } else {
        o.threshold = threshold;
      }
      o.side = parse_side(side);
      o.scores_out = opt(scores);
      o.threads = threads;
      uint64_t total = 0, kept = 0;
      int truncated = 0;
      if (auto s = cf_select_mono_file(in.c_str(), in_lm.c_str(), out_lm.c_str(), out.c_str(), &o,
                                       &total, &kept, &truncated)) {
        return fail(s);
      }
      if (truncated) {
        std::cerr << "corpusforge: warning: --top exceeds the input size, kept all lines\n";
      }
      std::cerr << kept << " of " << total << " lines kept\n";
      return 0;
    }});
  }
  // mix
  {
    auto* sub = app.add_subcommand("mix", "Combine bitext with synthetic pairs");
    static std::string bitext, synthetic, strategy = "original_ratio", ratio = "1:1", scores;
    static std::uint64_t seed = 1;
    sub->add_option("--bitext", bitext, "Authentic parallel corpus")->required();
    sub->add_option("--synthetic", synthetic, "Synthetic parallel corpus")->required();
    sub->add_option("--strategy", strategy, "original_ratio, upsampled_1_1 or cutoff");
    sub->add_option("--ratio", ratio, "bitext:synthetic parts for cutoff");
    sub->add_option("--scores", scores, "Synthetic scores (higher is better) for cutoff");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("-o,--output", out, "Mixed corpus")->required();
    commands.push_back({sub, [&] {
      cf_mix_options o;
      cf_mix_options_init(&o);
      o.strategy = strategy.c_str();
      o.ratio = ratio.c_str();
      o.seed = seed;
      o.synthetic_scores = opt(scores);
      uint64_t b = 0, s2 = 0;
      if (auto s = cf_mix_file(bitext.c_str(), synthetic.c_str(), &o, out.c_str(), &b, &s2)) {
        return fail(s);
      }
      std::cerr << b << " bitext + " << s2 << " synthetic lines\n";
      return 0;
    }});
  }
  // augment-unk
  {
    auto* sub = app.add_subcommand("augment-unk", "Add pairs with content words set to <unk>");
    io(sub);
    with_threads(sub);
    static int k_min = 1, k_max = 3, ratio = 1;
    static std::string unk = "<unk>", src_stop, tgt_stop;
    static std::uint64_t seed = 1;
    static bool synthetic_only = false;
    sub->add_option("--k-min", k_min, "Fewest replacements per side");
    sub->add_option("--k-max", k_max, "Most replacements per side");
    sub->add_option("--unk", unk, "Replacement token");
    sub->add_option("--ratio", ratio, "Synthetic copies per pair");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--src-stopwords", src_stop, "Source stopword list");
    sub->add_option("--tgt-stopwords", tgt_stop, "Target stopword list");
    sub->add_flag("--synthetic-only", synthetic_only, "Write only the synthetic pairs");
    commands.push_back({sub, [&] {
      cf_augment_options o;
      cf_augment_options_init(&o);
      o.k_min = k_min;
      o.k_max = k_max;
      o.unk_token = unk.c_str();
      o.output_ratio = ratio;
      o.seed = seed;
      o.src_stopwords = opt(src_stop);
      o.tgt_stopwords = opt(tgt_stop);
      o.combined = synthetic_only ? 0 : 1;
      o.threads = threads;
      uint64_t syn = 0, skipped = 0;
      if (auto s = cf_augment_unk_file(in.c_str(), out.c_str(), &o, &syn, &skipped)) return fail(s);
      std::cerr << syn << " synthetic pairs, " << skipped << " inputs skipped\n";
      return 0;
    }});
  }
  // bpe
  {
    static std::string codes, boundaries;
    static std::size_t merges = 0;
    static int min_frequency = 2;
    auto* sub = app.add_subcommand("bpe-train", "Learn BPE merges");
    sub->add_option("-i,--input", in, "Tokenized text")->required();
    sub->add_option("-c,--codes", codes, "Merge table output")->required();
    sub->add_option("--merges", merges, "Number of merges")->required()->check(CLI::PositiveNumber);
    sub->add_option("--boundaries", boundaries, "Morpheme boundaries, word<TAB>p1,p2");
    sub->add_option("--min-frequency", min_frequency, "Stop below this pair frequency")
        ->check(CLI::Range(1, 1 << 30));
    commands.push_back({sub, [&] {
      cf_bpe* bpe = nullptr;
      if (auto s = cf_bpe_train_file(in.c_str(), merges, opt(boundaries), min_frequency, &bpe)) {
        return fail(s);
      }
      const auto s = cf_bpe_save(bpe, codes.c_str());
      std::cerr << cf_bpe_merge_count(bpe) << " merges\n";
      cf_bpe_free(bpe);
      return s ? fail(s) : 0;
    }});
    auto* ap = app.add_subcommand("bpe-apply", "Segment text with a merge table");
    io(ap);
    with_threads(ap);
    ap->add_option("-c,--codes", codes, "Merge table")->required();
    ap->add_option("--boundaries", boundaries, "Morpheme boundaries, word<TAB>p1,p2");
    commands.push_back({ap, [&] {
      cf_bpe* bpe = nullptr;
      if (auto s = cf_bpe_load(codes.c_str(), opt(boundaries), &bpe)) return fail(s);
      const auto s = cf_bpe_apply_file(bpe, in.c_str(), out.c_str(), threads, nullptr);
      cf_bpe_free(bpe);
      return s ? fail(s) : 0;
    }});
    auto* un = app.add_subcommand("bpe-undo", "Join subwords back into words");
    io(un);
    commands.push_back({un, [&] {
      if (auto s = cf_bpe_undo_file(in.c_str(), out.c_str(), nullptr)) return fail(s);
      return 0;
    }});
  }
  // rerank
  {
    auto* sub = app.add_subcommand("rerank", "Re-rank n-best lists with r2l scores");
    static std::string nbest, r2l, sorted;
    static int n = 12;
    static double w_l2r = 1.0, w_r2l = 1.0;
    sub->add_option("--nbest", nbest, "Moses n-best list")->required();
    sub->add_option("--r2l", r2l, "id<TAB>logprob<TAB>tokens");
    sub->add_option("--n", n, "Hypotheses per sentence")->check(CLI::Range(1, 1 << 20));
    sub->add_option("--w-l2r", w_l2r, "Left-to-right weight");
    sub->add_option("--w-r2l", w_r2l, "Right-to-left weight");
    sub->add_option("-o,--output", out, "Best hypothesis per sentence")->required();
    sub->add_option("--sorted", sorted, "Re-sorted n-best lists");
    commands.push_back({sub, [&] {
      cf_rerank_options o;
      cf_rerank_options_init(&o);
      o.n = n;
      o.w_l2r = w_l2r;
      o.w_r2l = w_r2l;
      o.sorted_out = opt(sorted);
      if (auto s = cf_rerank_file(nbest.c_str(), opt(r2l), &o, out.c_str(), nullptr)) return fail(s);
      return 0;
    }});
  }
  // optim-bench
  {
    auto* sub = app.add_subcommand("optim-bench", "Run an optimizer on a test problem");
    static cf_optim_config cfg;
    cf_optim_config_init(&cfg);
    static std::string problem = "rosenbrock", kind = "adam", report;
    static std::int64_t steps = 1000;
    static std::uint64_t seed = 1;
    static double noise = 0.0;
    sub->add_option("--problem", problem, "quadratic, sphere or rosenbrock")
        ->check(CLI::IsMember({"quadratic", "sphere", "rosenbrock"}));
    sub->add_option("--kind", kind, "adam or qhadam")->check(CLI::IsMember({"adam", "qhadam"}));
    sub->add_option("--steps", steps, "Optimizer steps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed for the problem and gradient noise");
    sub->add_option("--lr0", cfg.lr0, "Peak learning rate");
    sub->add_option("--warmup", cfg.warmup, "Warm-up steps");
    sub->add_option("--beta1", cfg.beta1);
    sub->add_option("--beta2", cfg.beta2);
    sub->add_option("--eps", cfg.eps);
    sub->add_option("--nu1", cfg.nu1);
    sub->add_option("--nu2", cfg.nu2);
    sub->add_option("--grad-noise", noise, "Gaussian gradient noise stddev");
    sub->add_option("-o,--output", report, "Write the JSON report here");
    commands.push_back({sub, [&] {
      cfg.kind = kind.c_str();
      CfString rep;
      if (auto s = cf_optim_bench(problem.c_str(), &cfg, steps, seed, noise, &rep.p)) return fail(s);
      const auto j = nlohmann::json::parse(rep.str());
      if (!report.empty()) {
        std::ofstream f(report, std::ios::binary);
        f << j.dump(2) << '\n';
        if (!f) {
          std::cerr << "corpusforge: error: cannot write " << report << '\n';
          return static_cast<int>(CF_ERR_IO);
        }
      }
      std::cout << "final_loss " << j["final_loss"] << " best_loss " << j["best_loss"]
                << " diverged " << j["diverged"] << '\n';
      return 0;
    }});
  }
  // stats
  {
    auto* sub = app.add_subcommand("stats", "Line counts and retention from a manifest");
    static std::string manifest;
    static bool as_json = false;
    sub->add_option("manifest", manifest, "Stage manifest or run summary")->required();
    sub->add_flag("--json", as_json, "Print JSON instead of a table");
    commands.push_back({sub, [&] {
      CfString rep, table;
      if (auto s = cf_stats(manifest.c_str(), &rep.p, &table.p)) return fail(s);
      std::cout << (as_json ? rep.str() + "\n" : table.str());
      return 0;
    }});
  }
  // pipeline
  {
    auto* sub = app.add_subcommand("pipeline", "Run the configured stages");
    static std::string config;
    sub->add_option("-c,--config,config", config, "Pipeline config (JSON)")->required();
    commands.push_back({sub, [&] {
      CfString summary;
      if (auto s = cf_pipeline_run(config.c_str(), &summary.p)) return fail(s);
      std::cout << summary.str() << '\n';
      return 0;
    }});
  }
  // shuffle / shard / merge
  {
    auto* sub = app.add_subcommand("shuffle", "Seeded line shuffle");
    io(sub);
    static std::uint64_t seed = 1;
    sub->add_option("--seed", seed, "Random seed");
    commands.push_back({sub, [&] {
      if (auto s = cf_shuffle_file(in.c_str(), out.c_str(), seed)) return fail(s);
      return 0;
    }});
    auto* sh = app.add_subcommand("shard", "Round-robin split into k files");
    static std::string prefix;
    static std::size_t k = 0;
    sh->add_option("-i,--input", in, "Input file")->required();
    sh->add_option("--prefix", prefix, "Output prefix; shards are <prefix>.<j>")->required();
    sh->add_option("-k,--shards", k, "Number of shards")->required();
    commands.push_back({sh, [&] {
      if (auto s = cf_shard_file(in.c_str(), prefix.c_str(), k)) return fail(s);
      return 0;
    }});
    auto* mg = app.add_subcommand("merge", "Concatenate or interleave shards");
    static std::vector<std::string> shards;
    static bool interleave = false;
    mg->add_option("shards", shards, "Shard files in order")->required();
    mg->add_option("-o,--output", out, "Merged file")->required();
    mg->add_flag("--interleave", interleave, "Invert a round-robin shard split");
    commands.push_back({mg, [&] {
      std::vector<const char*> ptrs;
      for (const auto& s : shards) ptrs.push_back(s.c_str());
      if (auto s = cf_merge_files(ptrs.data(), ptrs.size(), out.c_str(), interleave ? 1 : 0)) {
        return fail(s);
      }
      return 0;
    }});
  }

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
    return CF_ERR_CONFIG;
  }
  for (const auto& c : commands) {
    if (c.app->parsed()) return c.run();
  }
  return CF_ERR_CONFIG;
}
