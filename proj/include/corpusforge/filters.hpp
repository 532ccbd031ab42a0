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

#ifndef CORPUSFORGE_FILTERS_HPP_
#define CORPUSFORGE_FILTERS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "corpusforge/corpus.hpp"
#include "json.hpp"

namespace corpusforge::filters {

struct FilterConfig {
  int max_tokens = 128;
  double max_len_ratio = 3.0;
  int len_slack = 5;
  double min_letter_ratio = 0.5;
  double min_overlap = 0.1;
  std::string expected_src_lang;
  std::string expected_tgt_lang;
  double langid_margin = 0.0;
  bool dedupe = true;

  // Throws ConfigError on out-of-range values.
  void validate() const;
  // Unknown keys are rejected.
  static FilterConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Character n-gram (n = 1..3) language identifier. Each order is an
// additively smoothed conditional distribution over the language's
// observed alphabet plus one unknown symbol; the per-character probability
// is the mean of the three orders. Text is lowercased and scored as a
// cycle closed by one space, so s and "s s" get the same mean score.
class LangIdModel {
 public:
  static constexpr double kAlpha = 0.1;

  static LangIdModel train(
      const std::map<std::string, std::vector<std::string>>& corpora);

  struct Result {
    std::string lang;
    double margin = 0.0;
  };
  Result classify(std::string_view text) const;

  // Mean per-character log-likelihood of `text` under `lang`.
  double score(std::string_view text, const std::string& lang) const;

  std::vector<std::string> languages() const;
  bool has_language(const std::string& lang) const {
    return models_.count(lang) > 0;
  }

  // Conditional probability P(c | h2 h1) for tests of normalization.
  double prob(const std::string& lang, char32_t h2, char32_t h1,
              char32_t c) const;
  // Observed alphabet of `lang`, excluding the unknown symbol.
  std::vector<char32_t> alphabet(const std::string& lang) const;

 private:
  struct PerLang {
    std::unordered_set<char32_t> alphabet;
    std::unordered_map<char32_t, std::uint64_t> uni;
    std::uint64_t uni_total = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> bi;
    std::unordered_map<char32_t, std::uint64_t> bi_ctx;
    std::unordered_map<std::uint64_t, std::uint64_t> tri;
    std::unordered_map<std::uint64_t, std::uint64_t> tri_ctx;
  };
  double log_prob(const PerLang& m, char32_t h2, char32_t h1, char32_t c) const;
  double score(std::u32string_view cycle, const PerLang& m) const;

  std::map<std::string, PerLang> models_;
};

// Bilingual lexicon of (src_word, tgt_word) entries; probabilities in the
// file are accepted and ignored.
class Lexicon {
 public:
  void add(std::string src, std::string tgt);
  bool contains(std::string_view src, std::string_view tgt) const;
  Lexicon reversed() const;
  std::size_t size() const { return entries_.size(); }

  static Lexicon load(const std::filesystem::path& path);

 private:
  std::unordered_set<std::string> entries_;
  std::vector<std::pair<std::string, std::string>> list_;
};

struct OverlapResult {
  double value = 0.0;
  double cov_st = 0.0;
  double cov_ts = 0.0;
  bool no_content = false;
};

// Tokens are lowercased here; a source content token is covered when the
// target has a lexicon translation, the identical token, the same digit
// string, or a token with LCS ratio >= 0.7.
OverlapResult content_overlap(std::span<const std::string> src,
                              std::span<const std::string> tgt,
                              const Lexicon& lexicon);

// Length of the longest common subsequence over code points divided by the
// longer length.
double lcs_ratio(std::u32string_view a, std::u32string_view b);

enum class Rule : int {
  kCorrupted = 0,
  kEmpty,
  kIdentical,
  kTooLong,
  kLengthRatio,
  kNonLetter,
  kWrongLanguage,
  kLowOverlap,
  kDuplicate,
};

inline constexpr std::size_t kRuleCount = 9;
std::string_view rule_name(Rule r);

struct Verdict {
  bool pass = true;
  std::optional<Rule> failed_rule;
  std::map<std::string, double> details;
};

// Evaluates the pair rules in fixed order and records the first failure.
// `langid` may be null (rule skipped); src/tgt are space-separated tokens.
Verdict filter_pair(const SentencePair& pair, const FilterConfig& config,
                    const LangIdModel* langid, const Lexicon& lexicon);

// Exact (src, tgt) duplicates removed, first occurrence kept.
std::vector<SentencePair> dedupe(std::span<const SentencePair> corpus,
                                 std::size_t* removed = nullptr);

struct FilterReport {
  std::uint64_t input = 0;
  std::uint64_t kept = 0;
  std::array<std::uint64_t, kRuleCount> rejected{};

  double retention() const {
    return input == 0 ? 1.0 : static_cast<double>(kept) / input;
  }
  FilterReport& operator+=(const FilterReport& other);
  nlohmann::json to_json() const;
};

struct FilterOutcome {
  std::vector<SentencePair> kept;
  std::vector<SentencePair> rejected;
  std::vector<Rule> rejected_rules;
  FilterReport report;
};

// Parallel map of filter_pair, then (optionally) dedupe on the survivors.
// Kept pairs preserve input order; results do not depend on `threads`.
FilterOutcome run_filter_pipeline(std::span<const SentencePair> corpus,
                                  const FilterConfig& config,
                                  const LangIdModel* langid,
                                  const Lexicon& lexicon, unsigned threads = 1);

}  // namespace corpusforge::filters

#endif  // CORPUSFORGE_FILTERS_HPP_
