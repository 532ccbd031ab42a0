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

#include "corpusforge/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <set>

#include "corpusforge/error.hpp"
#include "corpusforge/lm.hpp"
#include "corpusforge/ops.hpp"

namespace corpusforge::pipeline {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown config key: " + where + "." + key);
    }
  }
}

template <typename T>
T get(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("bad type for " + where + "." + key);
  }
}

const json& section(const PipelineConfig& c, const std::string& name) {
  static const json empty = json::object();
  return c.sections.contains(name) ? c.sections.at(name) : empty;
}

ops::NormalizeOptions parse_normalize(const json& j) {
  check_keys(j, "normalize", {"tokenize", "protect_placeholders"});
  ops::NormalizeOptions o;
  o.tokenize = get(j, "tokenize", true, "normalize");
  o.protect_placeholders = get(j, "protect_placeholders", true, "normalize");
  return o;
}

struct LmSection {
  int order = 4;
  int min_count = 1;
};

LmSection parse_lm(const json& j) {
  check_keys(j, "lm", {"order", "min_count"});
  LmSection s;
  s.order = get(j, "order", 4, "lm");
  s.min_count = get(j, "min_count", 1, "lm");
  if (s.order < 1 || s.order > lm::kMaxOrder) throw ConfigError("lm.order must be in [1, 5]");
  if (s.min_count < 1) throw ConfigError("lm.min_count must be at least 1");
  return s;
}

struct DccefSection {
  select::KeepPolicy keep;
  bool domain_weighted = false;
  ops::Side domain_side = ops::Side::kTgt;
};

DccefSection parse_dccef(const json& j) {
  check_keys(j, "dccef", {"keep_fraction", "threshold", "domain_weighted", "domain_side"});
  DccefSection s;
  const bool has_f = j.contains("keep_fraction");
  const bool has_t = j.contains("threshold");
  if (has_f == has_t) {
    throw ConfigError("dccef needs exactly one of keep_fraction and threshold");
  }
  if (has_f) {
    const double f = get(j, "keep_fraction", 1.0, "dccef");
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("dccef.keep_fraction must be in (0, 1]");
    s.keep = select::KeepFraction{f};
  } else {
    const double t = get(j, "threshold", 0.0, "dccef");
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("dccef.threshold must be in [0, 1]");
    s.keep = select::KeepThreshold{t};
  }
  s.domain_weighted = get(j, "domain_weighted", false, "dccef");
  s.domain_side = ops::side_from_string(get<std::string>(j, "domain_side", "tgt", "dccef"));
  return s;
}

struct SelectSection {
  select::MonoStrategy strategy = select::CombinedThreshold{0.0};
  std::optional<ops::Side> side;
};

SelectSection parse_select(const json& j) {
  check_keys(j, "select", {"strategy", "threshold", "top_n", "side"});
  SelectSection s;
  const auto strategy = get<std::string>(j, "strategy", "combined", "select");
  if (strategy == "combined") {
    if (j.contains("top_n")) throw ConfigError("select.top_n needs strategy in_domain_top");
    s.strategy = select::CombinedThreshold{get(j, "threshold", 0.0, "select")};
  } else if (strategy == "in_domain_top") {
    if (!j.contains("top_n")) throw ConfigError("select.top_n is required for in_domain_top");
    const auto n = get<std::int64_t>(j, "top_n", 0, "select");
    if (n < 0) throw ConfigError("select.top_n must be non-negative");
    s.strategy = select::InDomainTop{static_cast<std::size_t>(n)};
  } else {
    throw ConfigError("select.strategy must be combined or in_domain_top");
  }
  if (j.contains("side")) s.side = ops::side_from_string(get<std::string>(j, "side", "", "select"));
  return s;
}

struct MixSection {
  select::MixtureSpec spec;
  ops::Side score_side = ops::Side::kTgt;
};

MixSection parse_mix(const json& j) {
  check_keys(j, "mix", {"strategy", "ratio", "score_side"});
  MixSection s;
  s.spec.strategy = select::mix_strategy_from_string(
      get<std::string>(j, "strategy", "original_ratio", "mix"));
  const auto [a, b] = select::parse_ratio(get<std::string>(j, "ratio", "1:1", "mix"));
  s.spec.bitext_parts = a;
  s.spec.synthetic_parts = b;
  s.score_side = ops::side_from_string(get<std::string>(j, "score_side", "tgt", "mix"));
  return s;
}

augment::AugmentConfig parse_augment(const json& j) {
  check_keys(j, "augment", {"k_min", "k_max", "unk_token", "output_ratio"});
  augment::AugmentConfig c;
  c.k_min = get(j, "k_min", 1, "augment");
  c.k_max = get(j, "k_max", 3, "augment");
  c.unk_token = get<std::string>(j, "unk_token", "<unk>", "augment");
  c.output_ratio = get(j, "output_ratio", 1, "augment");
  c.validate();
  return c;
}

struct BpeSection {
  std::size_t merges = 1000;
  int min_frequency = 2;
};

BpeSection parse_bpe(const json& j) {
  check_keys(j, "bpe", {"merges", "min_frequency"});
  BpeSection s;
  const auto m = get<std::int64_t>(j, "merges", 1000, "bpe");
  if (m < 1) throw ConfigError("bpe.merges must be at least 1");
  s.merges = static_cast<std::size_t>(m);
  s.min_frequency = get(j, "min_frequency", 2, "bpe");
  if (s.min_frequency < 1) throw ConfigError("bpe.min_frequency must be at least 1");
  return s;
}

rerank::RerankConfig parse_rerank(const json& j) {
  check_keys(j, "rerank", {"n", "w_l2r", "w_r2l"});
  rerank::RerankConfig c;
  c.n = get(j, "n", 12, "rerank");
  c.w_l2r = get(j, "w_l2r", 1.0, "rerank");
  c.w_r2l = get(j, "w_r2l", 1.0, "rerank");
  c.validate();
  return c;
}

struct OptimSection {
  std::string problem = "quadratic";
  optim::OptimizerConfig config;
  optim::TrialOptions trial;
};

OptimSection parse_optim(const json& j) {
  check_keys(j, "optim", {"problem", "steps", "grad_noise", "threshold", "optimizer"});
  OptimSection s;
  s.problem = get<std::string>(j, "problem", "quadratic", "optim");
  optim::make_problem(s.problem);
  s.trial.steps = get<std::int64_t>(j, "steps", 5000, "optim");
  if (s.trial.steps < 1) throw ConfigError("optim.steps must be at least 1");
  s.trial.grad_noise = get(j, "grad_noise", 0.0, "optim");
  if (!(s.trial.grad_noise >= 0.0)) throw ConfigError("optim.grad_noise must be non-negative");
  s.trial.threshold = get(j, "threshold", 1e-6, "optim");
  if (j.contains("optimizer")) {
    const auto& o = j.at("optimizer");
    if (o.is_object() && o.contains("kind")) {
      throw ConfigError("unknown config key: optim.optimizer.kind");
    }
    s.config = optim::OptimizerConfig::from_json(o);
  }
  return s;
}

void validate_section(const std::string& name, const json& j) {
  if (name == "normalize") parse_normalize(j);
  else if (name == "filter") filters::FilterConfig::from_json(j);
  else if (name == "dedupe") check_keys(j, "dedupe", {});
  else if (name == "lm") parse_lm(j);
  else if (name == "dccef") parse_dccef(j);
  else if (name == "select") parse_select(j);
  else if (name == "mix") parse_mix(j);
  else if (name == "augment") parse_augment(j);
  else if (name == "bpe") parse_bpe(j);
  else if (name == "rerank") parse_rerank(j);
  else if (name == "optim") parse_optim(j);
}

const std::vector<const char*> kPathInputs = {
    "bitext",     "synthetic",  "synthetic_scores", "mono_in",       "mono_out",
    "mono_candidates", "lexicon", "boundaries",     "fwd_scores",    "bwd_scores",
    "nbest",      "r2l",        "stopwords_src",    "stopwords_tgt"};

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string hash_prefix(const json& j) { return sha256_hex(j.dump()).substr(0, 16); }

std::uint64_t count_lines(const fs::path& p) { return read_lines(p).size(); }

// Collects a stage's outputs inside a scratch directory, then swaps it into
// place so a stage directory is either complete or absent.
class StageWriter {
 public:
  StageWriter(const fs::path& workdir, std::string name, std::string created_by)
      : final_(workdir / name),
        scratch_(workdir / (name + ".partial")),
        name_(std::move(name)),
        created_by_(std::move(created_by)) {
    std::error_code ec;
    fs::remove_all(scratch_, ec);
    fs::create_directories(scratch_, ec);
    if (ec) throw IoError("cannot create " + scratch_.string() + ": " + ec.message());
  }

  fs::path path(const std::string& file) const { return scratch_ / file; }
  fs::path final_path(const std::string& file) const { return final_ / file; }

  void add(const std::string& file, FileRole role) {
    manifest_.entries.push_back(describe_file(scratch_ / file, role, created_by_, scratch_));
  }

  void report(const json& j) {
    std::ofstream out(scratch_ / "report.json", std::ios::binary);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write report for stage " + name_);
    out.close();
    add("report.json", FileRole::kReport);
  }

  Manifest commit() {
    manifest_.save(scratch_ / "manifest.json");
    std::error_code ec;
    fs::remove_all(final_, ec);
    fs::rename(scratch_, final_, ec);
    if (ec) throw IoError("cannot move stage output into " + final_.string());
    return manifest_;
  }

 private:
  fs::path final_;
  fs::path scratch_;
  std::string name_;
  std::string created_by_;
  Manifest manifest_;
};

struct State {
  std::optional<fs::path> bitext;
  std::optional<fs::path> synthetic;
  std::optional<fs::path> synthetic_scores;
  std::optional<fs::path> src_lm, tgt_lm, in_lm, out_lm;
  std::optional<fs::path> fwd_scores, bwd_scores;
  std::optional<fs::path> mono_candidates;
};

std::optional<fs::path> input_path(const PipelineConfig& c, const char* key) {
  if (!c.inputs.contains(key)) return std::nullopt;
  return fs::path(c.inputs.at(key).get<std::string>());
}

// Dependency check before anything runs, so a bad config never leaves
// half a pipeline behind.
void preflight(const PipelineConfig& c) {
  auto has = [&](const char* key) { return c.inputs.contains(key); };
  auto staged = [&](const char* s) {
    return std::find(c.stages.begin(), c.stages.end(), s) != c.stages.end();
  };
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  const bool domain_lms = staged("lm") && has("mono_in") && has("mono_out");
  for (const auto& s : c.stages) {
    if (s == "normalize" || s == "filter" || s == "dedupe" || s == "lm" || s == "augment" ||
        s == "bpe" || s == "dccef") {
      require(has("bitext"), "stage " + s + " needs inputs.bitext");
    }
    if (s == "lm") {
      require(has("mono_in") == has("mono_out"),
              "inputs.mono_in and inputs.mono_out go together");
    }
    if (s == "dccef") {
      const auto d = parse_dccef(section(c, "dccef"));
      require(has("fwd_scores") == has("bwd_scores"),
              "inputs.fwd_scores and inputs.bwd_scores go together");
      require(has("fwd_scores") || staged("lm"),
              "stage dccef needs inputs.fwd_scores/bwd_scores or the lm stage");
      require(!d.domain_weighted || domain_lms,
              "domain-weighted dccef needs the lm stage with inputs.mono_in and mono_out");
    }
    if (s == "select") {
      require(has("mono_candidates"), "stage select needs inputs.mono_candidates");
      require(domain_lms, "stage select needs the lm stage with inputs.mono_in and mono_out");
    }
    if (s == "mix") {
      require(has("bitext") && has("synthetic"), "stage mix needs inputs.bitext and synthetic");
      const auto m = parse_mix(section(c, "mix"));
      if (m.spec.strategy == select::MixStrategy::kCutoff) {
        require(has("synthetic_scores") || domain_lms,
                "cutoff mixing needs inputs.synthetic_scores or domain LMs");
      }
    }
    if (s == "rerank") {
      require(has("nbest"), "stage rerank needs inputs.nbest");
      const auto r = parse_rerank(section(c, "rerank"));
      require(has("r2l") || r.w_r2l == 0.0, "stage rerank needs inputs.r2l");
    }
  }
}

}  // namespace

const std::vector<std::string>& stage_order() {
  static const std::vector<std::string> order = {"normalize", "filter", "dedupe", "lm",
                                                 "dccef",     "select", "mix",    "augment",
                                                 "bpe",       "rerank", "optim"};
  return order;
}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw ConfigError("pipeline config must be a JSON object");
  const auto& order = stage_order();
  PipelineConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "global" || key == "inputs" || key == "stages") continue;
    if (std::find(order.begin(), order.end(), key) == order.end()) {
      throw ConfigError("unknown config key: " + key);
    }
    validate_section(key, value);
    c.sections[key] = value;
  }
  if (j.contains("global")) {
    const auto& g = j.at("global");
    check_keys(g, "global", {"threads", "seed", "workdir"});
    const auto threads = get<std::int64_t>(g, "threads", 1, "global");
    if (threads < 1 || threads > 1024) throw ConfigError("global.threads must be in [1, 1024]");
    c.threads = static_cast<unsigned>(threads);
    c.seed = get<std::uint64_t>(g, "seed", 1, "global");
    c.workdir = resolve(base_dir, get<std::string>(g, "workdir", "work", "global"));
  } else {
    c.workdir = resolve(base_dir, "work");
  }
  if (j.contains("inputs")) {
    const auto& in = j.at("inputs");
    if (!in.is_object()) throw ConfigError("inputs must be an object");
    for (const auto& [key, value] : in.items()) {
      if (key == "langid") {
        if (!value.is_object()) throw ConfigError("inputs.langid must map language to path");
        json seeds = json::object();
        for (const auto& [lang, path] : value.items()) {
          if (!path.is_string()) throw ConfigError("bad type for inputs.langid." + lang);
          seeds[lang] = resolve(base_dir, path.get<std::string>()).string();
        }
        c.inputs["langid"] = seeds;
        continue;
      }
      if (std::none_of(kPathInputs.begin(), kPathInputs.end(),
                       [&](const char* k) { return key == k; })) {
        throw ConfigError("unknown config key: inputs." + key);
      }
      if (!value.is_string()) throw ConfigError("bad type for inputs." + key);
      c.inputs[key] = resolve(base_dir, value.get<std::string>()).string();
    }
  }
  if (j.contains("stages")) {
    const auto& st = j.at("stages");
    if (!st.is_array()) throw ConfigError("stages must be an array");
    std::set<std::string> seen;
    for (const auto& s : st) {
      if (!s.is_string()) throw ConfigError("stage names must be strings");
      const auto name = s.get<std::string>();
      if (std::find(order.begin(), order.end(), name) == order.end()) {
        throw ConfigError("unknown stage: " + name);
      }
      if (!seen.insert(name).second) throw ConfigError("stage listed twice: " + name);
    }
    for (const auto& name : order) {
      if (seen.count(name)) c.stages.push_back(name);
    }
  }
  preflight(c);
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  auto c = from_json(j, path.parent_path());
  c.apply_environment();
  return c;
}

void PipelineConfig::apply_environment() {
  if (const char* t = std::getenv("CORPUSFORGE_THREADS"); t != nullptr && *t != '\0') {
    char* end = nullptr;
    const long v = std::strtol(t, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) {
      throw ConfigError(std::string("CORPUSFORGE_THREADS must be in [1, 1024], got ") + t);
    }
    threads = static_cast<unsigned>(v);
  }
  if (const char* w = std::getenv("CORPUSFORGE_WORKDIR"); w != nullptr && *w != '\0') {
    workdir = w;
  }
}

PipelineResult run_pipeline(const PipelineConfig& c) {
  PipelineResult result;
  if (c.stages.empty()) {
    result.summary = {{"stages", json::array()}, {"retention", json::array()}};
    return result;
  }
  std::error_code ec;
  fs::create_directories(c.workdir, ec);
  if (ec) throw IoError("cannot create workdir " + c.workdir.string() + ": " + ec.message());

  State st;
  st.bitext = input_path(c, "bitext");
  st.synthetic = input_path(c, "synthetic");
  st.synthetic_scores = input_path(c, "synthetic_scores");
  st.fwd_scores = input_path(c, "fwd_scores");
  st.bwd_scores = input_path(c, "bwd_scores");
  st.mono_candidates = input_path(c, "mono_candidates");

  json retention = json::array();
  std::uint64_t raw_lines = 0;
  if (st.bitext) {
    raw_lines = count_lines(*st.bitext);
    retention.push_back({{"step", "raw"}, {"lines", raw_lines}, {"retention", 1.0}});
  }
  auto record_retention = [&](const std::string& step, std::uint64_t lines) {
    retention.push_back(
        {{"step", step},
         {"lines", lines},
         {"retention", raw_lines == 0 ? 0.0 : static_cast<double>(lines) / raw_lines}});
  };
  json summary_stages = json::array();
  json rejected_by_rule;
  const unsigned threads = c.threads;

  for (const auto& name : c.stages) {
    const json hashed = {{"stage", name},
                         {"seed", c.seed},
                         {"inputs", c.inputs},
                         {"section", section(c, name)}};
    StageWriter w(c.workdir, name, name + " config:" + hash_prefix(hashed));
    const json& sec = section(c, name);
    json report = json::object();

    if (name == "normalize") {
      auto o = parse_normalize(sec);
      o.threads = threads;
      report["bitext_lines"] = ops::normalize_file(*st.bitext, w.path("bitext.tsv"), o);
      w.add("bitext.tsv", FileRole::kBitext);
      if (st.synthetic) {
        report["synthetic_lines"] = ops::normalize_file(*st.synthetic, w.path("synthetic.tsv"), o);
        w.add("synthetic.tsv", FileRole::kSynthetic);
      }
    } else if (name == "filter") {
      ops::FilterFileOptions o;
      o.config = filters::FilterConfig::from_json(sec);
      if (c.inputs.contains("langid")) {
        for (const auto& [lang, path] : c.inputs["langid"].items()) {
          o.langid_seeds[lang] = path.get<std::string>();
        }
      }
      o.lexicon = input_path(c, "lexicon");
      o.rejected_out = w.path("rejected.tsv");
      o.threads = threads;
      const auto rep = ops::filter_file(*st.bitext, w.path("bitext.tsv"), o);
      w.add("bitext.tsv", FileRole::kBitext);
      w.add("rejected.tsv", FileRole::kReport);
      report = rep.to_json();
      rejected_by_rule = report["rejected_by_rule"];
    } else if (name == "dedupe") {
      check_keys(sec, "dedupe", {});
      std::uint64_t removed = 0;
      const auto kept = ops::dedupe_file(*st.bitext, w.path("bitext.tsv"), &removed);
      w.add("bitext.tsv", FileRole::kBitext);
      report = {{"input", kept + removed}, {"kept", kept}, {"removed", removed}};
    } else if (name == "lm") {
      const auto s = parse_lm(sec);
      ops::lm_train_file(*st.bitext, w.path("src.arpa"), s.order, ops::Side::kSrc, s.min_count);
      ops::lm_train_file(*st.bitext, w.path("tgt.arpa"), s.order, ops::Side::kTgt, s.min_count);
      w.add("src.arpa", FileRole::kModel);
      w.add("tgt.arpa", FileRole::kModel);
      if (c.inputs.contains("mono_in")) {
        ops::lm_train_file(*input_path(c, "mono_in"), w.path("in.arpa"), s.order,
                           std::nullopt, s.min_count);
        ops::lm_train_file(*input_path(c, "mono_out"), w.path("out.arpa"), s.order,
                           std::nullopt, s.min_count);
        w.add("in.arpa", FileRole::kModel);
        w.add("out.arpa", FileRole::kModel);
      }
      report = {{"order", s.order}, {"min_count", s.min_count}};
    } else if (name == "dccef") {
      const auto s = parse_dccef(sec);
      ops::DccefFileOptions o;
      o.corpus = *st.bitext;
      if (st.fwd_scores) {
        o.fwd_scores = *st.fwd_scores;
        o.bwd_scores = *st.bwd_scores;
        report["scorer"] = "external";
      } else {
        // Without translation-model scores each side is scored by its own LM.
        ops::lm_score_file(*st.tgt_lm, *st.bitext, w.path("fwd.tsv"), ops::Side::kTgt, threads);
        ops::lm_score_file(*st.src_lm, *st.bitext, w.path("bwd.tsv"), ops::Side::kSrc, threads);
        w.add("fwd.tsv", FileRole::kScores);
        w.add("bwd.tsv", FileRole::kScores);
        o.fwd_scores = w.path("fwd.tsv");
        o.bwd_scores = w.path("bwd.tsv");
        report["scorer"] = "monolingual_lm";
      }
      if (s.domain_weighted) {
        o.in_lm = *st.in_lm;
        o.out_lm = *st.out_lm;
      }
      o.domain_side = s.domain_side;
      o.keep = s.keep;
      o.scores_out = w.path("scores.tsv");
      o.threads = threads;
      const auto input = count_lines(*st.bitext);
      const auto kept = ops::dccef_file(o, w.path("bitext.tsv"));
      w.add("bitext.tsv", FileRole::kBitext);
      w.add("scores.tsv", FileRole::kScores);
      report["input"] = input;
      report["kept"] = kept;
      report["domain_weighted"] = s.domain_weighted;
    } else if (name == "select") {
      const auto s = parse_select(sec);
      ops::SelectMonoOptions o;
      o.strategy = s.strategy;
      o.side = s.side;
      o.scores_out = w.path("scores.tsv");
      o.threads = threads;
      const auto out = ops::select_mono_file(*st.mono_candidates, *st.in_lm, *st.out_lm,
                                             w.path("selected.txt"), o);
      w.add("selected.txt", FileRole::kMono);
      w.add("scores.tsv", FileRole::kScores);
      report = {{"input", out.input}, {"kept", out.kept},
                {"truncated_request", out.truncated_request}};
    } else if (name == "mix") {
      auto s = parse_mix(sec);
      s.spec.seed = c.seed;
      std::optional<fs::path> scores = st.synthetic_scores;
      if (s.spec.strategy == select::MixStrategy::kCutoff && !scores) {
        write_scores(ops::combined_scores(*st.synthetic, *st.in_lm, *st.out_lm, s.score_side,
                                          threads),
                     w.path("synthetic_scores.tsv"));
        w.add("synthetic_scores.tsv", FileRole::kScores);
        scores = w.path("synthetic_scores.tsv");
      }
      const auto mix = ops::mix_file(*st.bitext, *st.synthetic, s.spec, scores,
                                     w.path("bitext.tsv"));
      w.add("bitext.tsv", FileRole::kBitext);
      report = {{"strategy", select::to_string(s.spec.strategy)},
                {"bitext_lines", mix.bitext_lines},
                {"synthetic_lines", mix.synthetic_lines},
                {"total", mix.pairs.size()}};
    } else if (name == "augment") {
      auto cfg = parse_augment(sec);
      cfg.seed = c.seed;
      if (auto p = input_path(c, "stopwords_src")) cfg.src_stopwords = augment::load_stopwords(p->string());
      if (auto p = input_path(c, "stopwords_tgt")) cfg.tgt_stopwords = augment::load_stopwords(p->string());
      const auto out = ops::augment_file(*st.bitext, w.path("bitext.tsv"), cfg, true, threads);
      w.add("bitext.tsv", FileRole::kBitext);
      report = {{"input", out.input}, {"synthetic", out.synthetic}, {"skipped", out.skipped},
                {"total", out.input + out.synthetic}};
    } else if (name == "bpe") {
      const auto s = parse_bpe(sec);
      const auto boundaries = input_path(c, "boundaries");
      const auto table = ops::bpe_train_file(*st.bitext, w.path("codes.txt"), s.merges,
                                             boundaries, s.min_frequency);
      w.add("codes.txt", FileRole::kModel);
      ops::bpe_apply_file(w.path("codes.txt"), *st.bitext, w.path("bitext.tsv"), boundaries,
                          threads);
      w.add("bitext.tsv", FileRole::kBitext);
      report = {{"merges_requested", s.merges}, {"merges_learned", table.size()}};
    } else if (name == "rerank") {
      const auto cfg = parse_rerank(sec);
      const auto n = ops::rerank_file(*input_path(c, "nbest"), input_path(c, "r2l"), cfg,
                                      w.path("best.txt"), w.path("sorted.nbest"));
      w.add("best.txt", FileRole::kMono);
      w.add("sorted.nbest", FileRole::kReport);
      report = {{"sentences", n}, {"n", cfg.n}, {"w_l2r", cfg.w_l2r}, {"w_r2l", cfg.w_r2l}};
    } else if (name == "optim") {
      const auto s = parse_optim(sec);
      json trials = json::array();
      for (auto kind : {optim::Kind::kAdam, optim::Kind::kQHAdam}) {
        ops::BenchOptions b;
        b.problem = s.problem;
        b.config = s.config;
        b.config.kind = kind;
        b.trial = s.trial;
        b.trial.seed = c.seed;
        trials.push_back(ops::optim_bench(b));
      }
      report = {{"problem", s.problem}, {"trials", trials}};
    }
    w.report(report);
    Manifest m = w.commit();

    // Point later stages at the committed files.
    auto committed = [&](const char* file) { return w.final_path(file); };
    if (name == "normalize") {
      st.bitext = committed("bitext.tsv");
      if (st.synthetic) st.synthetic = committed("synthetic.tsv");
    } else if (name == "filter" || name == "dedupe" || name == "dccef" || name == "mix" ||
               name == "augment" || name == "bpe") {
      st.bitext = committed("bitext.tsv");
    } else if (name == "lm") {
      st.src_lm = committed("src.arpa");
      st.tgt_lm = committed("tgt.arpa");
      if (c.inputs.contains("mono_in")) {
        st.in_lm = committed("in.arpa");
        st.out_lm = committed("out.arpa");
      }
    }
    if (name == "normalize" || name == "filter" || name == "dedupe" || name == "dccef") {
      for (const auto& e : m.entries) {
        if (e.path == "bitext.tsv") record_retention(name, e.line_count);
      }
    }

    const auto manifest_rel = fs::path(name) / "manifest.json";
    summary_stages.push_back(
        {{"name", name},
         {"manifest", manifest_rel.generic_string()},
         {"manifest_sha256", sha256_file(c.workdir / manifest_rel)}});
    result.stages.push_back({name, std::move(m)});
  }

  result.summary = {{"stages", summary_stages}, {"retention", retention}};
  if (!rejected_by_rule.is_null()) result.summary["rejected_by_rule"] = rejected_by_rule;
  std::ofstream out(c.workdir / "summary.json", std::ios::binary);
  out << result.summary.dump(2) << '\n';
  if (!out) throw IoError("cannot write run summary");
  return result;
}

}  // namespace corpusforge::pipeline
