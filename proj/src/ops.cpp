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

#include "corpusforge/ops.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "corpusforge/error.hpp"
#include "corpusforge/lm.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/textnorm.hpp"

namespace corpusforge::ops {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos
                                                                 : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::string join_fields(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += '\t';
    out += fields[i];
  }
  return out;
}

template <typename Fn>
std::vector<std::string> map_fields(const std::vector<std::string>& lines, unsigned threads,
                                    Fn&& fn) {
  std::vector<std::string> out(lines.size());
  parallel_for(lines.size(), threads, [&](std::size_t i) {
    auto fields = split_fields(lines[i]);
    for (auto& f : fields) f = fn(f);
    out[i] = join_fields(fields);
  });
  return out;
}

std::vector<SentencePair> read_pairs(const fs::path& path, const std::string& origin = {}) {
  return read_parallel(path, OnError::kAbort, origin).pairs;
}

std::string format_double(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const std::string& pick(const SentencePair& p, Side side) {
  return side == Side::kSrc ? p.src : p.tgt;
}

}  // namespace

Side side_from_string(const std::string& s) {
  if (s == "src" || s == "source") return Side::kSrc;
  if (s == "tgt" || s == "target") return Side::kTgt;
  throw ConfigError("side must be src or tgt, got '" + s + "'");
}

std::string normalize_line(const std::string& line, const NormalizeOptions& options) {
  auto fields = split_fields(line);
  for (auto& f : fields) {
    std::string text = textnorm::normalize(f);
    if (options.tokenize) {
      if (options.protect_placeholders) {
        auto masked = textnorm::mask_placeholders(text);
        const auto tokens = textnorm::tokenize(masked.text);
        text = textnorm::unmask(textnorm::join_tokens(tokens), masked.map).text;
      } else {
        text = textnorm::join_tokens(textnorm::tokenize(text));
      }
    }
    f = std::move(text);
  }
  return join_fields(fields);
}

std::uint64_t normalize_file(const fs::path& in, const fs::path& out,
                             const NormalizeOptions& options) {
  const auto lines = read_lines(in);
  std::vector<std::string> result(lines.size());
  parallel_for(lines.size(), options.threads,
               [&](std::size_t i) { result[i] = normalize_line(lines[i], options); });
  write_lines(result, out);
  return result.size();
}

std::uint64_t mask_file(const fs::path& in, const fs::path& out, const fs::path& map_out) {
  const auto lines = read_lines(in);
  std::vector<std::string> masked(lines.size());
  std::vector<std::string> maps(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto fields = split_fields(lines[i]);
    nlohmann::json slots = nlohmann::json::array();
    for (auto& f : fields) {
      auto m = textnorm::mask_placeholders(f);
      f = std::move(m.text);
      slots.push_back(m.map.to_json());
    }
    masked[i] = join_fields(fields);
    maps[i] = nlohmann::json{{"slots", slots}}.dump();
  }
  write_lines(masked, out);
  write_lines(maps, map_out);
  return lines.size();
}

std::uint64_t unmask_file(const fs::path& in, const fs::path& map_in, const fs::path& out) {
  const auto lines = read_lines(in);
  const auto maps = read_lines(map_in);
  if (maps.size() != lines.size()) {
    throw DataError("placeholder map has " + std::to_string(maps.size()) + " lines, text has " +
                    std::to_string(lines.size()));
  }
  std::vector<std::string> result(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(maps[i]);
    } catch (const nlohmann::json::exception&) {
      throw DataError("malformed placeholder map", i + 1);
    }
    if (!j.is_object() || !j.contains("slots") || !j["slots"].is_array()) {
      throw DataError("placeholder map needs a slots array", i + 1);
    }
    auto fields = split_fields(lines[i]);
    if (j["slots"].size() != fields.size()) {
      throw DataError("placeholder map does not match the field count", i + 1);
    }
    try {
      for (std::size_t k = 0; k < fields.size(); ++k) {
        fields[k] = textnorm::unmask(fields[k],
                                     textnorm::PlaceholderMap::from_json(j["slots"][k])).text;
      }
    } catch (const DataError& e) {
      throw DataError(e.what(), i + 1);
    }
    result[i] = join_fields(fields);
  }
  write_lines(result, out);
  return result.size();
}

std::uint64_t tokenize_file(const fs::path& in, const fs::path& out, unsigned threads) {
  const auto result = map_fields(read_lines(in), threads, [](const std::string& f) {
    return textnorm::join_tokens(textnorm::tokenize(f));
  });
  write_lines(result, out);
  return result.size();
}

std::uint64_t detokenize_file(const fs::path& in, const fs::path& out) {
  const auto result = map_fields(read_lines(in), 1, [](const std::string& f) {
    return textnorm::detokenize(textnorm::split_tokens(f));
  });
  write_lines(result, out);
  return result.size();
}

std::vector<std::vector<std::string>> read_sentences(const fs::path& in,
                                                     std::optional<Side> side) {
  const auto lines = read_lines(in);
  std::vector<std::vector<std::string>> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto fields = split_fields(lines[i]);
    std::size_t k = 0;
    if (fields.size() == 2) {
      k = side.value_or(Side::kTgt) == Side::kSrc ? 0 : 1;
    } else if (fields.size() != 1) {
      throw DataError("expected one or two TAB-separated fields", i + 1);
    }
    out.push_back(textnorm::split_tokens(fields[k]));
  }
  return out;
}

void truecase_train_file(const fs::path& in, const fs::path& model_out, Side side) {
  const auto sentences = read_sentences(in, side);
  textnorm::TruecaseModel::train(sentences).save(model_out);
}

std::uint64_t truecase_apply_file(const fs::path& model, const fs::path& in,
                                  const fs::path& out) {
  const auto tc = textnorm::TruecaseModel::load(model);
  const auto result = map_fields(read_lines(in), 1, [&](const std::string& f) {
    const auto tokens = textnorm::split_tokens(f);
    return textnorm::join_tokens(tc.apply(tokens));
  });
  write_lines(result, out);
  return result.size();
}

filters::FilterReport filter_file(const fs::path& in, const fs::path& out,
                                  const FilterFileOptions& options) {
  options.config.validate();
  std::optional<filters::LangIdModel> langid;
  if (!options.langid_seeds.empty()) {
    std::map<std::string, std::vector<std::string>> seeds;
    for (const auto& [lang, path] : options.langid_seeds) seeds[lang] = read_lines(path);
    langid = filters::LangIdModel::train(seeds);
  } else if (!options.config.expected_src_lang.empty() ||
             !options.config.expected_tgt_lang.empty()) {
    throw ConfigError("expected languages need language-id seed text");
  }
  filters::Lexicon lexicon;
  if (options.lexicon) lexicon = filters::Lexicon::load(*options.lexicon);

  const auto lines = read_lines(in);
  // Lines without exactly one TAB cannot be pairs; they count as corrupted.
  std::vector<SentencePair> pairs;
  std::vector<std::size_t> line_of;
  std::vector<std::size_t> malformed;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tab = lines[i].find('\t');
    if (tab == std::string::npos || lines[i].find('\t', tab + 1) != std::string::npos) {
      malformed.push_back(i);
      continue;
    }
    SentencePair p;
    p.id = i;
    p.src = lines[i].substr(0, tab);
    p.tgt = lines[i].substr(tab + 1);
    pairs.push_back(std::move(p));
    line_of.push_back(i);
  }
  auto outcome = filters::run_filter_pipeline(pairs, options.config,
                                              langid ? &*langid : nullptr, lexicon,
                                              options.threads);
  auto report = outcome.report;
  report.input += malformed.size();
  report.rejected[static_cast<std::size_t>(filters::Rule::kCorrupted)] += malformed.size();
  write_parallel(outcome.kept, out);

  if (options.rejected_out) {
    std::vector<std::pair<std::size_t, std::string>> rejected;
    for (std::size_t i : malformed) {
      rejected.emplace_back(i, std::string(filters::rule_name(filters::Rule::kCorrupted)));
    }
    for (std::size_t k = 0; k < outcome.rejected.size(); ++k) {
      rejected.emplace_back(outcome.rejected[k].id,
                            std::string(filters::rule_name(outcome.rejected_rules[k])));
    }
    std::sort(rejected.begin(), rejected.end());
    std::vector<std::string> out_lines;
    for (const auto& [line, rule] : rejected) {
      out_lines.push_back(std::to_string(line + 1) + '\t' + rule + '\t' + lines[line]);
    }
    write_lines(out_lines, *options.rejected_out);
  }
  if (options.report_out) {
    std::ofstream rep(*options.report_out, std::ios::binary);
    if (!rep) throw IoError("cannot write " + options.report_out->string());
    rep << report.to_json().dump(2) << '\n';
    if (!rep) throw IoError("write failed: " + options.report_out->string());
  }
  return report;
}

std::uint64_t dedupe_file(const fs::path& in, const fs::path& out, std::uint64_t* removed) {
  const auto pairs = read_pairs(in);
  std::size_t dropped = 0;
  const auto kept = filters::dedupe(pairs, &dropped);
  write_parallel(kept, out);
  if (removed) *removed = dropped;
  return kept.size();
}

void lm_train_file(const fs::path& in, const fs::path& arpa_out, int order,
                   std::optional<Side> side, int min_count) {
  const auto sentences = read_sentences(in, side);
  lm::NGramModel::train(sentences, order, min_count).save_arpa(arpa_out);
}

double lm_score_file(const fs::path& arpa, const fs::path& in, const fs::path& scores_out,
                     std::optional<Side> side, unsigned threads) {
  const auto model = lm::NGramModel::load_arpa(arpa);
  const auto sentences = read_sentences(in, side);
  std::vector<double> h(sentences.size());
  parallel_for(sentences.size(), threads,
               [&](std::size_t i) { h[i] = lm::cross_entropy(sentences[i], model); });
  write_scores(h, scores_out);
  return lm::perplexity(sentences, model);
}

std::uint64_t dccef_file(const DccefFileOptions& o, const fs::path& out) {
  const auto pairs = read_pairs(o.corpus);
  const auto fwd = read_scores(o.fwd_scores);
  const auto bwd = read_scores(o.bwd_scores);
  if (fwd.size() != pairs.size() || bwd.size() != pairs.size()) {
    throw DataError("score files must have one line per pair (" + std::to_string(pairs.size()) +
                    " pairs, " + std::to_string(fwd.size()) + " forward, " +
                    std::to_string(bwd.size()) + " backward)");
  }
  if (o.in_lm.has_value() != o.out_lm.has_value()) {
    throw ConfigError("domain weighting needs both an in-domain and an out-of-domain LM");
  }
  std::optional<lm::NGramModel> lm_in, lm_out;
  if (o.in_lm) {
    lm_in = lm::NGramModel::load_arpa(*o.in_lm);
    lm_out = lm::NGramModel::load_arpa(*o.out_lm);
  }
  std::vector<select::DccefScore> scores(pairs.size());
  parallel_for(pairs.size(), o.threads, [&](std::size_t i) {
    if (lm_in) {
      const auto tokens = textnorm::split_tokens(pick(pairs[i], o.domain_side));
      const auto ms = select::mono_score(tokens, *lm_in, *lm_out);
      scores[i] = select::dccef_score(fwd[i], bwd[i], ms.h_in, ms.h_out);
    } else {
      scores[i] = select::dccef_score(fwd[i], bwd[i]);
    }
  });
  const auto kept = select::dccef_filter(pairs, scores, o.keep);
  write_parallel(kept, out);
  if (o.scores_out) {
    std::vector<double> finals(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) finals[i] = scores[i].final_score;
    write_scores(finals, *o.scores_out);
  }
  return kept.size();
}

namespace {

std::vector<select::MonoScore> score_mono(const std::vector<std::vector<std::string>>& sentences,
                                          const fs::path& lm_in, const fs::path& lm_out,
                                          unsigned threads) {
  const auto in = lm::NGramModel::load_arpa(lm_in);
  const auto out = lm::NGramModel::load_arpa(lm_out);
  std::vector<select::MonoScore> scores(sentences.size());
  parallel_for(sentences.size(), threads, [&](std::size_t i) {
    scores[i] = select::mono_score(sentences[i], in, out);
  });
  return scores;
}

}  // namespace

SelectMonoOutcome select_mono_file(const fs::path& in, const fs::path& lm_in,
                                   const fs::path& lm_out, const fs::path& out,
                                   const SelectMonoOptions& options) {
  const auto lines = read_lines(in);
  const auto sentences = read_sentences(in, options.side);
  const auto scores = score_mono(sentences, lm_in, lm_out, options.threads);
  const auto sel = select::select_mono(scores, options.strategy);
  std::vector<std::string> kept;
  for (std::size_t i : sel.indices) kept.push_back(lines[i]);
  write_lines(kept, out);
  if (options.scores_out) {
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      rows.push_back(std::to_string(i) + '\t' + format_double(scores[i].h_in) + '\t' +
                     format_double(scores[i].h_out) + '\t' + format_double(scores[i].combined));
    }
    write_lines(rows, *options.scores_out);
  }
  return {lines.size(), kept.size(), sel.truncated_request};
}

std::vector<double> combined_scores(const fs::path& in, const fs::path& lm_in,
                                    const fs::path& lm_out, std::optional<Side> side,
                                    unsigned threads) {
  const auto scores = score_mono(read_sentences(in, side), lm_in, lm_out, threads);
  std::vector<double> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i].combined;
  return out;
}

select::Mixture mix_file(const fs::path& bitext, const fs::path& synthetic,
                         const select::MixtureSpec& spec,
                         const std::optional<fs::path>& synthetic_scores, const fs::path& out) {
  const auto bit = read_pairs(bitext, "bitext");
  const auto syn = read_pairs(synthetic, "synthetic");
  std::vector<double> scores;
  if (spec.strategy == select::MixStrategy::kCutoff) {
    if (!synthetic_scores) throw ConfigError("cutoff mixing requires synthetic scores");
    scores = read_scores(*synthetic_scores);
  }
  auto mix = select::build_mixture(bit, syn, spec, scores);
  write_parallel(mix.pairs, out);
  return mix;
}

AugmentFileOutcome augment_file(const fs::path& in, const fs::path& out,
                                const augment::AugmentConfig& config, bool combined,
                                unsigned threads) {
  const auto pairs = read_pairs(in);
  auto result = augment::unk_augment(pairs, config, threads);
  AugmentFileOutcome o{pairs.size(), result.synthetic.size(), result.skipped};
  if (combined) {
    std::vector<SentencePair> all(pairs.begin(), pairs.end());
    all.insert(all.end(), result.synthetic.begin(), result.synthetic.end());
    write_parallel(all, out);
  } else {
    write_parallel(result.synthetic, out);
  }
  return o;
}

bpe::MergeTable bpe_train_file(const fs::path& in, const fs::path& codes_out,
                               std::size_t num_merges,
                               const std::optional<fs::path>& boundaries, int min_frequency) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& line : read_lines(in)) {
    for (const auto& f : split_fields(line)) {
      for (auto& tok : textnorm::split_tokens(f)) ++counts[tok];
    }
  }
  std::optional<bpe::BoundarySet> bset;
  if (boundaries) bset = bpe::BoundarySet::load(boundaries->string());
  auto table = bpe::train(counts, num_merges, bset ? &*bset : nullptr, min_frequency);
  table.save(codes_out.string());
  return table;
}

std::uint64_t bpe_apply_file(const fs::path& codes, const fs::path& in, const fs::path& out,
                             const std::optional<fs::path>& boundaries, unsigned threads) {
  const auto table = bpe::MergeTable::load(codes.string());
  std::optional<bpe::BoundarySet> bset;
  if (boundaries) bset = bpe::BoundarySet::load(boundaries->string());
  const auto lines = read_lines(in);
  std::vector<std::string> result(lines.size());
  parallel_chunks(lines.size(), threads, [&](std::size_t begin, std::size_t end) {
    bpe::Segmenter seg(table, bset ? &*bset : nullptr);
    for (std::size_t i = begin; i < end; ++i) {
      auto fields = split_fields(lines[i]);
      for (auto& f : fields) f = seg.apply_line(f);
      result[i] = join_fields(fields);
    }
  });
  write_lines(result, out);
  return result.size();
}

std::uint64_t bpe_undo_file(const fs::path& in, const fs::path& out) {
  const auto result = map_fields(read_lines(in), 1,
                                 [](const std::string& f) { return bpe::undo_line(f); });
  write_lines(result, out);
  return result.size();
}

std::uint64_t rerank_file(const fs::path& nbest, const std::optional<fs::path>& r2l,
                          const rerank::RerankConfig& config, const fs::path& out,
                          const std::optional<fs::path>& sorted_out) {
  config.validate();
  auto groups = rerank::parse_nbest_file(nbest.string(), config.n);
  if (r2l) {
    rerank::join_r2l(groups, rerank::parse_r2l_file(r2l->string()));
  } else if (config.w_r2l != 0.0) {
    throw ConfigError("r2l scores are required unless the r2l weight is 0");
  }
  const auto result = rerank::rerank(groups, config);
  std::vector<std::string> best;
  for (const auto& e : result.best) best.push_back(e.tokens);
  write_lines(best, out);
  if (sorted_out) {
    std::vector<std::string> rows;
    for (const auto& [id, group] : result.sorted) {
      for (auto e : group) {
        if (e.has_r2l) e.features.emplace_back("r2l", std::vector<double>{e.r2l});
        e.total = e.combined;
        rows.push_back(rerank::format_entry(e));
      }
    }
    write_lines(rows, *sorted_out);
  }
  return best.size();
}

nlohmann::json optim_bench(const BenchOptions& options) {
  options.config.validate();
  auto problem = optim::make_problem(options.problem, options.trial.seed);
  const auto start = problem->start();
  const auto result = optim::run_trial(*problem, options.config, options.trial);
  auto report = result.report(options.config, options.problem, options.trial.max_points);
  report["steps"] = options.trial.steps;
  report["seed"] = options.trial.seed;
  report["grad_check"] = optim::grad_check(*problem, start);
  return report;
}

namespace {

nlohmann::json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception&) {
    throw DataError("malformed JSON in " + path.string());
  }
}

// A pipeline summary: verify every stage manifest, report the retention table.
nlohmann::json summary_stats(const fs::path& path, const nlohmann::json& summary) {
  const auto dir = path.parent_path();
  try {
    for (const auto& stage : summary.at("stages")) {
      const auto rel = stage.at("manifest").get<std::string>();
      const auto manifest_path = dir / rel;
      if (!fs::exists(manifest_path)) throw IoError("missing manifest " + manifest_path.string());
      if (sha256_file(manifest_path) != stage.at("manifest_sha256").get<std::string>()) {
        throw DataError("integrity error: " + rel + " does not match the run summary");
      }
      verify_manifest(Manifest::load(manifest_path), manifest_path.parent_path());
    }
    nlohmann::json files = nlohmann::json::array();
    for (const auto& row : summary.at("retention")) {
      files.push_back({{"path", row.at("step")},
                       {"role", "bitext"},
                       {"lines", row.at("lines")},
                       {"created_by", ""},
                       {"retention", row.at("retention")}});
    }
    nlohmann::json report = {{"summary", path.generic_string()}, {"files", files}};
    if (summary.contains("rejected_by_rule")) {
      report["rejected_by_rule"] = summary["rejected_by_rule"];
    }
    return report;
  } catch (const nlohmann::json::exception&) {
    throw DataError("malformed run summary " + path.string());
  }
}

}  // namespace

nlohmann::json stats(const fs::path& manifest_path) {
  const auto doc = load_json(manifest_path);
  if (doc.is_object() && doc.contains("retention") && doc.contains("stages")) {
    return summary_stats(manifest_path, doc);
  }
  const auto manifest = Manifest::from_json(doc);
  const auto dir = manifest_path.parent_path();
  verify_manifest(manifest, dir);
  nlohmann::json files = nlohmann::json::array();
  const bool with_retention = manifest.entries.size() > 1;
  const double first =
      manifest.entries.empty() ? 0.0 : static_cast<double>(manifest.entries.front().line_count);
  for (const auto& e : manifest.entries) {
    nlohmann::json row = {{"path", e.path},
                          {"role", to_string(e.role)},
                          {"lines", e.line_count},
                          {"created_by", e.created_by}};
    if (with_retention) {
      row["retention"] = first > 0 ? static_cast<double>(e.line_count) / first : 0.0;
    }
    files.push_back(row);
  }
  nlohmann::json report = {{"manifest", manifest_path.generic_string()}, {"files", files}};
  const auto report_path = dir / "report.json";
  if (fs::exists(report_path)) {
    std::ifstream in(report_path);
    try {
      const auto rep = nlohmann::json::parse(in);
      if (rep.is_object() && rep.contains("rejected_by_rule")) {
        report["rejected_by_rule"] = rep["rejected_by_rule"];
      }
    } catch (const nlohmann::json::exception&) {
      throw DataError("malformed report " + report_path.string());
    }
  }
  return report;
}

std::string format_stats(const nlohmann::json& report) {
  std::ostringstream out;
  const auto& files = report.at("files");
  bool with_retention = false;
  std::size_t width = 4;
  for (const auto& f : files) {
    with_retention = with_retention || f.contains("retention");
    width = std::max(width, f.at("path").get<std::string>().size());
  }
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-9s  %12s", static_cast<int>(width), "file", "role",
                "lines");
  out << buf << (with_retention ? "  retention" : "") << '\n';
  for (const auto& f : files) {
    std::snprintf(buf, sizeof buf, "%-*s  %-9s  %12llu", static_cast<int>(width),
                  f.at("path").get<std::string>().c_str(),
                  f.at("role").get<std::string>().c_str(),
                  static_cast<unsigned long long>(f.at("lines").get<std::uint64_t>()));
    out << buf;
    if (f.contains("retention")) {
      std::snprintf(buf, sizeof buf, "  %9.3f", f.at("retention").get<double>());
      out << buf;
    }
    out << '\n';
  }
  if (report.contains("rejected_by_rule")) {
    out << "\nrejected by rule\n";
    for (const auto& [rule, count] : report["rejected_by_rule"].items()) {
      std::snprintf(buf, sizeof buf, "  %-16s %12llu", rule.c_str(),
                    static_cast<unsigned long long>(count.get<std::uint64_t>()));
      out << buf << '\n';
    }
  }
  return out.str();
}

}  // namespace corpusforge::ops
