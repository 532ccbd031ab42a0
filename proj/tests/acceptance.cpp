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

// Acceptance suite: one line per criterion, exit status 1 when any of the
// hard criteria fail. The throughput line is informational.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "corpusforge/augment.hpp"
#include "corpusforge/bpe.hpp"
#include "corpusforge/corpus.hpp"
#include "corpusforge/filters.hpp"
#include "corpusforge/lm.hpp"
#include "corpusforge/optim.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/pipeline.hpp"
#include "corpusforge/rerank.hpp"
#include "corpusforge/rng.hpp"
#include "corpusforge/select.hpp"
#include "corpusforge/textnorm.hpp"
#include "corpusforge/unicode.hpp"
#include "json.hpp"

namespace cf = corpusforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- 1: dual score ----

Outcome dccef_closed_form() {
  Outcome o;
  cf::Rng rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = 5.0 * rng.uniform();
    const double b = 5.0 * rng.uniform();
    const double expected = std::exp(-(std::fabs(a - b) + 0.5 * (a + b)));
    const auto s = cf::select::dccef_score(a, b);
    worst = std::max(worst, std::fabs(s.dual - expected));
    o.require(s.dual > 0.0 && s.dual <= 1.0, "dual score outside (0, 1]");
    o.require(s.final_score == s.dual, "final differs from dual without domain weight");

    const double sum = a + b;
    const double gap = std::fabs(a - b);
    const double wider = std::min(gap + 0.25, sum);
    if (wider > gap) {
      const auto w = cf::select::dccef_score((sum + wider) / 2, (sum - wider) / 2);
      o.require(w.dual < s.dual, "not decreasing in the gap");
    }
    const auto shifted = cf::select::dccef_score(a + 0.125, b + 0.125);
    o.require(shifted.dual < s.dual, "not decreasing in the sum");
  }
  o.require(worst <= 1e-12, "closed form mismatch " + fmt("%.3g", worst));
  o.detail = o.pass ? "1000 pairs, max abs error " + fmt("%.3g", worst) : o.detail;
  return o;
}

// ---- 2: mixtures ----

std::vector<cf::SentencePair> tagged(std::size_t n, const std::string& tag) {
  std::vector<cf::SentencePair> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({i, tag + std::to_string(i), "t" + std::to_string(i), ""});
  }
  return out;
}

Outcome mixture_arithmetic() {
  using cf::select::MixStrategy;
  Outcome o;
  cf::Rng rng(2002);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_bit = 1 + rng.below(100);
    const std::size_t n_syn = 3 * n_bit + rng.below(500);
    const auto bit = tagged(n_bit, "b");
    const auto syn = tagged(n_syn, "s");
    std::vector<double> scores(n_syn);
    for (auto& s : scores) s = rng.normal();
    const std::uint64_t seed = trial + 1u;
    for (std::uint64_t r = 1; r <= 3; ++r) {
      auto m = cf::select::build_mixture(bit, syn, {MixStrategy::kCutoff, 1, r, seed}, scores);
      o.require(m.pairs.size() == n_bit + r * n_bit, "cutoff 1:" + std::to_string(r) + " size");
      o.require(m.bitext_lines == n_bit && m.synthetic_lines == r * n_bit,
                "cutoff portion sizes");
    }
    auto up = cf::select::build_mixture(bit, syn, {MixStrategy::kUpsampled, 1, 1, seed});
    o.require(up.pairs.size() == 2 * n_syn, "upsampled size");
    auto orig = cf::select::build_mixture(bit, syn, {MixStrategy::kOriginalRatio, 1, 1, seed});
    o.require(orig.pairs.size() == n_bit + n_syn, "original ratio size");
  }
  if (o.pass) o.detail = "200 size pairs, cutoff 1:1/1:2/1:3, upsampled 1:1, original ratio";
  return o;
}

// ---- 3: domain separation ----

struct Domain {
  std::vector<std::string> own;
  std::vector<std::string> shared;
};

cf::lm::Tokens domain_sentence(cf::Rng& rng, const Domain& d) {
  cf::lm::Tokens s;
  const auto len = 6 + rng.below(9);
  for (std::uint64_t k = 0; k < len; ++k) {
    const auto& pool = rng.uniform() < 0.2 ? d.shared : d.own;
    const double u = rng.uniform();
    s.push_back(pool[static_cast<std::size_t>(u * u * static_cast<double>(pool.size()))]);
  }
  return s;
}

Outcome domain_separation() {
  Outcome o;
  std::vector<std::string> shared;
  for (int i = 0; i < 100; ++i) shared.push_back("c" + std::to_string(i));
  Domain in{{}, shared}, out{{}, shared};
  for (int i = 0; i < 400; ++i) {
    in.own.push_back("med" + std::to_string(i));
    out.own.push_back("gen" + std::to_string(i));
  }
  cf::Rng rng(3003);
  std::vector<cf::lm::Tokens> train_in, train_out, held_in, held_out;
  for (int i = 0; i < 5000; ++i) train_in.push_back(domain_sentence(rng, in));
  for (int i = 0; i < 5000; ++i) train_out.push_back(domain_sentence(rng, out));
  for (int i = 0; i < 1000; ++i) held_in.push_back(domain_sentence(rng, in));
  for (int i = 0; i < 1000; ++i) held_out.push_back(domain_sentence(rng, out));
  const auto lm_in = cf::lm::NGramModel::train(train_in, 3);
  const auto lm_out = cf::lm::NGramModel::train(train_out, 3);

  std::vector<cf::select::MonoScore> scores;
  double mean_in = 0.0, mean_out = 0.0;
  for (const auto& s : held_in) {
    scores.push_back(cf::select::mono_score(s, lm_in, lm_out));
    mean_in += scores.back().combined;
  }
  for (const auto& s : held_out) {
    scores.push_back(cf::select::mono_score(s, lm_in, lm_out));
    mean_out += scores.back().combined;
  }
  mean_in /= static_cast<double>(held_in.size());
  mean_out /= static_cast<double>(held_out.size());
  const double gap = mean_in - mean_out;
  const auto sel = cf::select::select_mono(scores, cf::select::CombinedThreshold{0.0});
  std::size_t true_pos = 0;
  for (auto i : sel.indices) true_pos += i < held_in.size();
  const double precision =
      sel.indices.empty() ? 0.0 : static_cast<double>(true_pos) / sel.indices.size();
  o.require(gap > 0.5, "mean gap " + fmt("%.3f", gap) + " nats/token");
  o.require(precision >= 0.9, "precision " + fmt("%.3f", precision));
  if (o.pass) {
    o.detail = "gap " + fmt("%.3f", gap) + " nats/token, precision " + fmt("%.4f", precision) +
               " over " + std::to_string(sel.indices.size()) + " selected";
  }
  return o;
}

// ---- 4: language model ----

Outcome lm_correctness() {
  Outcome o;
  cf::Rng rng(4004);
  const std::size_t vocab = 1000;
  // Sparse first-order chain: each word has a handful of likely successors.
  std::vector<std::vector<std::size_t>> next(vocab);
  for (auto& n : next) {
    for (int k = 0; k < 6; ++k) n.push_back(rng.below(vocab));
  }
  std::vector<cf::lm::Tokens> corpus;
  std::size_t tokens = 0;
  while (tokens < 100000) {
    cf::lm::Tokens s;
    std::size_t w = rng.below(vocab);
    const auto len = 5 + rng.below(16);
    for (std::uint64_t k = 0; k < len; ++k) {
      s.push_back("w" + std::to_string(w));
      w = rng.uniform() < 0.9 ? next[w][rng.below(next[w].size())] : rng.below(vocab);
    }
    tokens += s.size();
    corpus.push_back(std::move(s));
  }
  const auto m = cf::lm::NGramModel::train(corpus, 4);

  double worst = 0.0;
  std::vector<std::vector<std::vector<std::uint32_t>>> seen(4);
  for (int n = 1; n <= 3; ++n) seen[n] = m.contexts(n);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::uint32_t> ctx;
    const auto len = rng.below(4);
    if (i % 2 == 0 && len > 0) {
      const auto& pool = seen[len];
      ctx = pool[rng.below(pool.size())];
    } else {
      for (std::uint64_t k = 0; k < len; ++k) {
        ctx.push_back(static_cast<std::uint32_t>(rng.below(m.vocab_size())));
      }
    }
    worst = std::max(worst, std::fabs(m.total_probability(ctx) - 1.0));
  }
  o.require(worst <= 1e-6, "normalization error " + fmt("%.3g", worst));

  std::stringstream arpa;
  m.write_arpa(arpa);
  const auto back = cf::lm::NGramModel::read_arpa(arpa);
  double arpa_err = 0.0;
  for (const auto& s : corpus) {
    arpa_err = std::max(arpa_err, std::fabs(back.sentence_log_prob(s) - m.sentence_log_prob(s)));
  }
  o.require(arpa_err <= 1e-9, "ARPA round trip error " + fmt("%.3g", arpa_err));

  std::vector<std::string> bag;
  for (const auto& s : corpus) bag.insert(bag.end(), s.begin(), s.end());
  rng.shuffle(bag);
  std::vector<cf::lm::Tokens> shuffled;
  std::size_t pos = 0;
  for (const auto& s : corpus) {
    shuffled.emplace_back(bag.begin() + static_cast<long>(pos),
                          bag.begin() + static_cast<long>(pos + s.size()));
    pos += s.size();
  }
  const double h_train = std::log(cf::lm::perplexity(corpus, m));
  const double h_shuf = std::log(cf::lm::perplexity(shuffled, m));
  o.require(h_train <= h_shuf, "training cross-entropy above shuffled");
  if (o.pass) {
    o.detail = std::to_string(tokens) + " tokens, norm err " + fmt("%.2g", worst) +
               ", ARPA err " + fmt("%.2g", arpa_err) + ", H train " + fmt("%.3f", h_train) +
               " <= shuffled " + fmt("%.3f", h_shuf);
  }
  return o;
}

// ---- 5: optimizers ----

Outcome optimizer_reduction() {
  using namespace cf::optim;
  Outcome o;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    auto prob = make_quadratic(50, 500 + trial);
    OptimizerConfig qc;
    qc.kind = Kind::kQHAdam;
    qc.lr0 = 0.01;
    qc.warmup = 10;
    qc.nu1 = qc.nu2 = 1.0;
    OptimizerConfig ac = qc;
    ac.kind = Kind::kAdam;
    auto xa = prob->start(), xq = prob->start();
    OptimizerState sa(50), sq(50);
    for (int t = 0; t < 100; ++t) {
      const auto ua = adam_step(sa, prob->grad(xa), ac);
      const auto uq = qhadam_step(sq, prob->grad(xq), qc);
      for (std::size_t i = 0; i < 50; ++i) {
        xa[i] -= ua[i];
        xq[i] -= uq[i];
        worst = std::max(worst, std::fabs(xa[i] - xq[i]));
      }
    }
  }
  o.require(worst <= 1e-12, "trajectory gap " + fmt("%.3g", worst));
  double worst_check = 0.0;
  for (const auto& name : problem_names()) {
    auto p = make_problem(name, 3);
    worst_check = std::max(worst_check, grad_check(*p, p->start()));
  }
  o.require(worst_check < 1e-6, "grad_check " + fmt("%.3g", worst_check));
  OptimizerConfig def;
  o.require(lr_at(1600, def) == 0.0005, "lr_at(1600) = " + fmt("%.17g", lr_at(1600, def)));
  o.require(lr_at(6400, def) == 0.00025, "lr_at(6400) = " + fmt("%.17g", lr_at(6400, def)));
  if (o.pass) {
    o.detail = "max trajectory gap " + fmt("%.2g", worst) + ", grad_check " +
               fmt("%.2g", worst_check) + ", lr 0.0005 / 0.00025";
  }
  return o;
}

// ---- 6: re-ranking ----

Outcome rerank_properties() {
  using namespace cf::rerank;
  Outcome o;
  cf::Rng rng(6006);
  o.require(RerankConfig{}.n == 12, "default n is not 12");
  auto grid = [&] { return -static_cast<double>(rng.below(40)) / 4.0; };
  for (int trial = 0; trial < 1000; ++trial) {
    NBestGroups g;
    const auto n = 1 + rng.below(12);
    for (std::uint64_t i = 0; i < n; ++i) {
      NBestEntry e;
      e.sent_id = trial;
      e.tokens = "h" + std::to_string(i);
      e.total = grid();
      e.r2l = grid();
      e.has_r2l = true;
      g[trial].push_back(e);
    }
    RerankConfig cfg;
    cfg.w_l2r = 0.5 * static_cast<double>(1 + rng.below(4));
    cfg.w_r2l = 0.5 * static_cast<double>(1 + rng.below(4));
    const auto& group = g[trial];
    std::size_t best = 0;
    for (std::size_t i = 1; i < group.size(); ++i) {
      const double si = cfg.w_l2r * group[i].total + cfg.w_r2l * group[i].r2l;
      const double sb = cfg.w_l2r * group[best].total + cfg.w_r2l * group[best].r2l;
      if (si > sb) best = i;
    }
    const auto chosen = rerank(g, cfg).best.at(0).tokens;
    o.require(chosen == group[best].tokens, "argmax differs from brute force");

    auto shifted = g;
    const double shift = static_cast<double>(rng.below(33)) / 2.0 - 8.0;
    for (auto& e : shifted[trial]) e.r2l += shift;
    o.require(rerank(shifted, cfg).best.at(0).tokens == chosen, "r2l shift changed the choice");

    RerankConfig l2r_only = cfg;
    l2r_only.w_r2l = 0.0;
    const auto sorted = rerank(g, l2r_only).sorted.at(trial);
    std::vector<std::size_t> order(group.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return group[a].total > group[b].total; });
    for (std::size_t i = 0; i < order.size(); ++i) {
      o.require(sorted[i].tokens == group[order[i]].tokens, "w_r2l = 0 changed the l2r order");
    }
  }
  if (o.pass) o.detail = "1000 groups, brute force, shift invariance, l2r order, n = 12";
  return o;
}

// ---- 7: augmentation ----

Outcome unk_augmentation() {
  Outcome o;
  const std::vector<std::string> stop = {"the", "a", "of", "and", "i"};
  const std::vector<std::string> content = {"house", "river", "green", "walks", "kot",
                                            "dom", "\xc5\xbc\xc3\xb3\xc5\x82w", "music",
                                            "table", "city", "small", "reads"};
  const std::vector<std::string> other = {",", ".", "42", "!"};
  cf::Rng rng(7007);
  auto side = [&] {
    std::string s;
    const auto len = 3 + rng.below(12);
    for (std::uint64_t k = 0; k < len; ++k) {
      if (k) s += ' ';
      const double u = rng.uniform();
      const auto& pool = u < 0.3 ? stop : u < 0.4 ? other : content;
      s += pool[rng.below(pool.size())];
    }
    return s;
  };
  std::vector<cf::SentencePair> corpus;
  for (std::size_t i = 0; i < 10000; ++i) corpus.push_back({i, side(), side(), ""});
  cf::augment::AugmentConfig c;
  c.src_stopwords = {stop.begin(), stop.end()};
  c.tgt_stopwords = c.src_stopwords;
  const auto r = cf::augment::unk_augment(corpus, c);
  const double ratio =
      static_cast<double>(corpus.size() + r.synthetic.size()) / static_cast<double>(corpus.size());
  o.require(ratio >= 1.9 && ratio <= 2.0, "size ratio " + fmt("%.4f", ratio));
  for (const auto& s : r.synthetic) {
    const auto& orig = corpus.at(s.id);
    for (int k = 0; k < 2; ++k) {
      const auto a = cf::textnorm::split_tokens(k == 0 ? orig.src : orig.tgt);
      const auto b = cf::textnorm::split_tokens(k == 0 ? s.src : s.tgt);
      if (a.size() != b.size()) {
        o.require(false, "token count changed");
        continue;
      }
      int replaced = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == b[i]) continue;
        ++replaced;
        o.require(b[i] == c.unk_token, "changed token is not the unknown token");
        o.require(cf::augment::is_content_word(a[i], c.src_stopwords),
                  "non-content word replaced: " + a[i]);
      }
      o.require(replaced >= 1 && replaced <= 3, "replacement count outside 1..3");
    }
  }
  if (o.pass) {
    o.detail = "10000 pairs, combined size " + fmt("%.4f", ratio) + "x, " +
               std::to_string(r.skipped) + " skipped";
  }
  return o;
}

// ---- 8: subwords ----

std::string random_word(cf::Rng& rng) {
  static const std::vector<std::string> letters = {"a", "b", "c", "d", "e", "k", "o", "s", "t",
                                                   "\xc4\x85", "\xc5\xbc", "\xc3\xb3"};
  std::string w;
  const auto n = 1 + rng.below(10);
  for (std::uint64_t i = 0; i < n; ++i) w += letters[rng.below(letters.size())];
  return w;
}

std::vector<std::size_t> piece_offsets(const std::vector<std::string>& pieces) {
  std::vector<std::size_t> offsets = {0};
  for (const auto& p : pieces) {
    std::string core = p;
    if (core.size() >= 2 && core.compare(core.size() - 2, 2, "@@") == 0) core.resize(core.size() - 2);
    offsets.push_back(offsets.back() + cf::utf8::length(core));
  }
  return offsets;
}

Outcome bpe_properties(const fs::path& data) {
  using namespace cf::bpe;
  Outcome o;
  cf::Rng rng(8008);
  std::vector<std::string> train_lines;
  for (int i = 0; i < 2000; ++i) train_lines.push_back(random_word(rng));
  const auto table = train(count_words(train_lines), 500);
  Segmenter seg(table);
  for (int i = 0; i < 10000; ++i) {
    const auto w = random_word(rng);
    o.require(undo(seg.word(w)) == std::vector<std::string>{w}, "round trip failed on " + w);
  }

  const std::vector<std::string> stems = {"play", "walk", "talk", "jump", "read", "work",
                                          "kot", "dom", "las", "\xc5\xbc\xc3\xb3\xc5\x82w"};
  const std::vector<std::string> suffixes = {"ing", "ed", "er", "ers", "s", "ami", "ach", "owi",
                                             "ow\xc4\x85", "ness"};
  BoundarySet bounds;
  std::map<std::string, std::uint64_t> counts;
  std::vector<std::string> words;
  for (int i = 0; i < 1000; ++i) {
    std::string stem = stems[rng.below(stems.size())];
    if (rng.below(3) == 0) stem += stems[rng.below(stems.size())];
    const std::string word = stem + suffixes[rng.below(suffixes.size())];
    bounds.add(word, {cf::utf8::length(stem)});
    counts[word] += 1 + rng.below(5);
    words.push_back(word);
  }
  const auto constrained = train(counts, 400, &bounds);
  Segmenter cseg(constrained, &bounds);
  std::size_t violations = 0;
  for (const auto& w : words) {
    const auto offsets = piece_offsets(cseg.word(w));
    for (std::size_t p : *bounds.find(w)) {
      for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
        violations += offsets[i] < p && p < offsets[i + 1];
      }
    }
  }
  o.require(violations == 0, std::to_string(violations) + " boundary violations");

  std::ifstream in(data / "bpe_low.txt");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::ostringstream merges;
  train(count_words(lines), 100).write(merges);
  std::ifstream golden_in(data / "bpe_low.golden");
  std::stringstream golden;
  golden << golden_in.rdbuf();
  o.require(!lines.empty() && merges.str() == golden.str(), "golden merge sequence differs");
  if (o.pass) {
    o.detail = "10000 round trips, 1000-word boundary fixture with " +
               std::to_string(constrained.size()) + " merges, golden merges match";
  }
  return o;
}

// ---- 9: pipeline ----

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(e.path(), root).generic_string()] = ss.str();
  }
  return files;
}

Outcome pipeline_determinism(const fs::path& data, const fs::path& scratch) {
  Outcome o;
  const std::vector<std::string> stages = {"normalize", "filter", "lm",  "dccef",
                                           "mix",       "augment", "bpe"};
  std::vector<std::map<std::string, std::string>> runs;
  nlohmann::json retention;
  for (unsigned threads : {1u, 8u, 1u, 8u}) {
    const auto workdir = scratch / ("run" + std::to_string(runs.size()));
    const nlohmann::json j = {
        {"global", {{"threads", threads}, {"seed", 11}, {"workdir", workdir.string()}}},
        {"inputs",
         {{"bitext", (data / "pipeline_bitext.tsv").string()},
          {"synthetic", (data / "pipeline_synthetic.tsv").string()}}},
        {"filter", {{"min_overlap", 0.0}}},
        {"dccef", {{"keep_fraction", 0.8}}},
        {"mix", {{"strategy", "original_ratio"}}},
        {"bpe", {{"merges", 300}}},
        {"stages", stages}};
    const auto result =
        cf::pipeline::run_pipeline(cf::pipeline::PipelineConfig::from_json(j, {}));
    retention = result.summary["retention"];
    runs.push_back(snapshot(workdir));
  }
  for (std::size_t i = 1; i < runs.size(); ++i) {
    o.require(runs[i] == runs[0], "run " + std::to_string(i) + " differs from run 0");
  }
  for (const auto& s : stages) {
    o.require(runs[0].count(s + "/manifest.json") == 1, "missing manifest for " + s);
  }
  std::uint64_t prev = ~std::uint64_t{0};
  std::string table;
  for (const auto& row : retention) {
    const auto lines = row["lines"].get<std::uint64_t>();
    o.require(lines <= prev, "retention increases at " + row["step"].get<std::string>());
    prev = lines;
    table += (table.empty() ? "" : " > ") + std::to_string(lines);
  }
  if (o.pass) {
    o.detail = "threads 1/8 twice, " + std::to_string(runs[0].size()) +
               " identical files, retention " + table;
  }
  return o;
}

// ---- 10: throughput ----

Outcome throughput(double* seconds) {
  Outcome o;
  const std::vector<std::string> en = {"the", "house", "is", "green", "river", "walks", "city",
                                       "small", "music", "reads", "of", "and"};
  const std::vector<std::string> pl = {"dom", "jest", "zielony", "rzeka", "miasto", "ma\xc5\x82y",
                                       "muzyka", "czyta", "kot", "i", "w", "na"};
  const std::vector<std::string> tails = {",", ".", "!", "?", "", "", ""};
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  cf::filters::FilterConfig fc;
  fc.min_overlap = 0.0;
  cf::filters::Lexicon lexicon;
  const std::size_t total = 1000000, chunk = 100000;
  std::uint64_t kept = 0;
  double elapsed = 0.0;
  for (std::size_t start = 0; start < total; start += chunk) {
    std::vector<cf::SentencePair> raw(chunk);
    cf::parallel_for(chunk, threads, [&](std::size_t i) {
      auto rng = cf::Rng::for_record(10, start + i);
      auto side = [&](const std::vector<std::string>& v) {
        std::string s;
        const auto len = 3 + rng.below(20);
        for (std::uint64_t k = 0; k < len; ++k) {
          if (k) s += ' ';
          s += v[rng.below(v.size())] + tails[rng.below(tails.size())];
        }
        return s;
      };
      raw[i] = {start + i, side(en), side(pl), ""};
    });
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<cf::SentencePair> tok(chunk);
    cf::parallel_for(chunk, threads, [&](std::size_t i) {
      tok[i] = {raw[i].id, cf::textnorm::join_tokens(cf::textnorm::tokenize(raw[i].src)),
                cf::textnorm::join_tokens(cf::textnorm::tokenize(raw[i].tgt)), ""};
    });
    const auto out = cf::filters::run_filter_pipeline(tok, fc, nullptr, lexicon, threads);
    elapsed += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    kept += out.report.kept;
  }
  *seconds = elapsed;
  o.require(elapsed < 60.0, "1M pairs took " + fmt("%.1f", elapsed) + " s");
  o.detail = "1M pairs tokenized and filtered in " + fmt("%.1f", elapsed) + " s on " +
             std::to_string(threads) + " thread(s), " + std::to_string(kept) + " kept";
  if (!o.pass) o.detail += "; target is < 60 s on 4 cores";
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  bool hard;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const fs::path data = argc > 1 ? fs::path(argv[1]) : fs::path(CF_TEST_DATA);
  const fs::path scratch = fs::temp_directory_path() / ("cf_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  double throughput_s = 0.0;
  const std::vector<Criterion> criteria = {
      {1, "dual score closed form", 1.0, true, dccef_closed_form},
      {2, "mixture arithmetic", 10.0, true, mixture_arithmetic},
      {3, "domain separation", 30.0, true, domain_separation},
      {4, "language model", 60.0, true, lm_correctness},
      {5, "QHAdam reduces to Adam", 5.0, true, optimizer_reduction},
      {6, "re-ranker", 5.0, true, rerank_properties},
      {7, "unknown-word augmentation", 10.0, true, unk_augmentation},
      {8, "subword segmentation", 10.0, true, [&] { return bpe_properties(data); }},
      {9, "pipeline determinism", 120.0, true, [&] { return pipeline_determinism(data, scratch); }},
      {10, "throughput", 1e9, false, [&] { return throughput(&throughput_s); }},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.hard && s > c.budget_s) {
      o.pass = false;
      o.detail += "; took " + fmt("%.2f", s) + " s, budget " + fmt("%.0f", c.budget_s) + " s";
    }
    const char* verdict = o.pass ? "PASS" : (c.hard ? "FAIL" : "WARN");
    std::printf("%s %2d %-26s %7.2fs  %s\n", verdict, c.id, c.name, s, o.detail.c_str());
    std::fflush(stdout);
    if (c.hard && !o.pass) ++failed;
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  return failed == 0 ? 0 : 1;
}
