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

#include "corpusforge/filters.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "corpusforge/error.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/textnorm.hpp"
#include "corpusforge/unicode.hpp"

namespace corpusforge::filters {
namespace {

bool is_joiner(char32_t c) { return c == '\'' || c == '-'; }

enum class TokenClass { kOther, kAlpha, kNumeric };

TokenClass classify_token(std::u32string_view t) {
  bool letter = false;
  bool digit = false;
  bool alpha_ok = true;
  bool num_ok = true;
  for (char32_t c : t) {
    const bool l = utf8::is_letter(c);
    const bool d = utf8::is_digit(c);
    letter = letter || l;
    digit = digit || d;
    alpha_ok = alpha_ok && (l || is_joiner(c));
    num_ok = num_ok && (d || c == '.' || c == ',');
  }
  if (letter && alpha_ok) return TokenClass::kAlpha;
  if (digit && num_ok) return TokenClass::kNumeric;
  return TokenClass::kOther;
}

struct ContentToken {
  std::string text;
  std::u32string chars;
  std::string digits;
};

std::vector<ContentToken> content_tokens(std::span<const std::string> tokens) {
  std::vector<ContentToken> out;
  for (const auto& t : tokens) {
    std::string low = utf8::lower(t);
    std::u32string chars = utf8::to_u32(low);
    if (classify_token(chars) == TokenClass::kOther) continue;
    std::string digits;
    for (char32_t c : chars) {
      if (c >= '0' && c <= '9') digits.push_back(static_cast<char>(c));
    }
    out.push_back({std::move(low), std::move(chars), std::move(digits)});
  }
  return out;
}

template <typename Translates>
double coverage(const std::vector<ContentToken>& from,
                const std::vector<ContentToken>& to, Translates&& translates) {
  std::size_t covered = 0;
  for (const auto& s : from) {
    for (const auto& t : to) {
      if (s.text == t.text || translates(s.text, t.text) ||
          (!s.digits.empty() && s.digits == t.digits)) {
        ++covered;
        break;
      }
      const auto lo = std::min(s.chars.size(), t.chars.size());
      const auto hi = std::max(s.chars.size(), t.chars.size());
      if (static_cast<double>(lo) >= 0.7 * static_cast<double>(hi) &&
          lcs_ratio(s.chars, t.chars) >= 0.7) {
        ++covered;
        break;
      }
    }
  }
  return static_cast<double>(covered) / static_cast<double>(from.size());
}

bool corrupted(std::string_view s) {
  if (!utf8::valid(s)) return true;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char32_t c = utf8::decode(s, pos);
    if (c <= 0x08 || (c >= 0x0B && c <= 0x1F) || c == utf8::kReplacement) {
      return true;
    }
  }
  return false;
}

double letter_ratio(std::string_view s) {
  std::size_t letters = 0;
  std::size_t visible = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char32_t c = utf8::decode(s, pos);
    if (utf8::is_space(c)) continue;
    ++visible;
    letters += utf8::is_letter(c);
  }
  return visible == 0 ? 0.0 : static_cast<double>(letters) / visible;
}

const std::set<std::string>& config_keys() {
  static const std::set<std::string> keys = {
      "max_tokens",        "max_len_ratio",     "len_slack",
      "min_letter_ratio",  "min_overlap",       "expected_src_lang",
      "expected_tgt_lang", "langid_margin",     "dedupe"};
  return keys;
}

}  // namespace

void FilterConfig::validate() const {
  if (max_tokens < 1) throw ConfigError("filter.max_tokens must be >= 1");
  if (!(max_len_ratio >= 1.0)) throw ConfigError("filter.max_len_ratio must be >= 1");
  if (len_slack < 0) throw ConfigError("filter.len_slack must be >= 0");
  if (!(min_letter_ratio >= 0.0 && min_letter_ratio <= 1.0)) {
    throw ConfigError("filter.min_letter_ratio must be in [0,1]");
  }
  if (!(min_overlap >= 0.0 && min_overlap <= 1.0)) {
    throw ConfigError("filter.min_overlap must be in [0,1]");
  }
  if (!(langid_margin >= 0.0)) throw ConfigError("filter.langid_margin must be >= 0");
}

FilterConfig FilterConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("filter config must be a JSON object");
  FilterConfig c;
  for (const auto& [key, value] : j.items()) {
    if (!config_keys().count(key)) throw ConfigError("unknown config key: filter." + key);
  }
  try {
    c.max_tokens = j.value("max_tokens", c.max_tokens);
    c.max_len_ratio = j.value("max_len_ratio", c.max_len_ratio);
    c.len_slack = j.value("len_slack", c.len_slack);
    c.min_letter_ratio = j.value("min_letter_ratio", c.min_letter_ratio);
    c.min_overlap = j.value("min_overlap", c.min_overlap);
    c.expected_src_lang = j.value("expected_src_lang", c.expected_src_lang);
    c.expected_tgt_lang = j.value("expected_tgt_lang", c.expected_tgt_lang);
    c.langid_margin = j.value("langid_margin", c.langid_margin);
    c.dedupe = j.value("dedupe", c.dedupe);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("filter config: ") + ex.what());
  }
  c.validate();
  return c;
}

nlohmann::json FilterConfig::to_json() const {
  return {{"max_tokens", max_tokens},
          {"max_len_ratio", max_len_ratio},
          {"len_slack", len_slack},
          {"min_letter_ratio", min_letter_ratio},
          {"min_overlap", min_overlap},
          {"expected_src_lang", expected_src_lang},
          {"expected_tgt_lang", expected_tgt_lang},
          {"langid_margin", langid_margin},
          {"dedupe", dedupe}};
}

void Lexicon::add(std::string src, std::string tgt) {
  src = utf8::lower(src);
  tgt = utf8::lower(tgt);
  if (entries_.insert(src + '\t' + tgt).second) {
    list_.emplace_back(std::move(src), std::move(tgt));
  }
}

bool Lexicon::contains(std::string_view src, std::string_view tgt) const {
  if (entries_.empty()) return false;
  std::string key;
  key.reserve(src.size() + tgt.size() + 1);
  key.append(src);
  key.push_back('\t');
  key.append(tgt);
  return entries_.count(key) > 0;
}

Lexicon Lexicon::reversed() const {
  Lexicon r;
  for (const auto& [s, t] : list_) r.add(t, s);
  return r;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  Lexicon lex;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (l.empty()) continue;
    const std::size_t t1 = l.find('\t');
    if (t1 == std::string::npos || t1 == 0) {
      throw DataError("lexicon line needs src<TAB>tgt", i + 1);
    }
    std::size_t t2 = l.find('\t', t1 + 1);
    if (t2 == std::string::npos) t2 = l.size();
    if (t2 == t1 + 1) throw DataError("empty target word in lexicon", i + 1);
    lex.add(l.substr(0, t1), l.substr(t1 + 1, t2 - t1 - 1));
  }
  return lex;
}

double lcs_ratio(std::u32string_view a, std::u32string_view b) {
  if (a.empty() || b.empty()) return 0.0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) /
         static_cast<double>(std::max(a.size(), b.size()));
}

OverlapResult content_overlap(std::span<const std::string> src,
                              std::span<const std::string> tgt,
                              const Lexicon& lexicon) {
  OverlapResult r;
  const auto s = content_tokens(src);
  const auto t = content_tokens(tgt);
  if (s.empty() || t.empty()) {
    r.no_content = true;
    return r;
  }
  r.cov_st = coverage(s, t, [&](const std::string& a, const std::string& b) {
    return lexicon.contains(a, b);
  });
  r.cov_ts = coverage(t, s, [&](const std::string& a, const std::string& b) {
    return lexicon.contains(b, a);
  });
  r.value = std::min(r.cov_st, r.cov_ts);
  return r;
}

std::string_view rule_name(Rule r) {
  switch (r) {
    case Rule::kCorrupted: return "corrupted";
    case Rule::kEmpty: return "empty";
    case Rule::kIdentical: return "identical";
    case Rule::kTooLong: return "too_long";
    case Rule::kLengthRatio: return "length_ratio";
    case Rule::kNonLetter: return "non_letter";
    case Rule::kWrongLanguage: return "wrong_language";
    case Rule::kLowOverlap: return "low_overlap";
    case Rule::kDuplicate: return "duplicate";
  }
  return "unknown";
}

Verdict filter_pair(const SentencePair& pair, const FilterConfig& config,
                    const LangIdModel* langid, const Lexicon& lexicon) {
  Verdict v;
  auto fail = [&](Rule r) {
    v.pass = false;
    v.failed_rule = r;
    return v;
  };
  if (corrupted(pair.src) || corrupted(pair.tgt)) return fail(Rule::kCorrupted);

  const auto src = textnorm::split_tokens(pair.src);
  const auto tgt = textnorm::split_tokens(pair.tgt);
  v.details["src_tokens"] = static_cast<double>(src.size());
  v.details["tgt_tokens"] = static_cast<double>(tgt.size());
  if (src.empty() || tgt.empty()) return fail(Rule::kEmpty);

  if (utf8::lower(pair.src) == utf8::lower(pair.tgt)) return fail(Rule::kIdentical);

  const auto max_tokens = static_cast<std::size_t>(config.max_tokens);
  if (src.size() > max_tokens || tgt.size() > max_tokens) return fail(Rule::kTooLong);

  const double lo = static_cast<double>(std::min(src.size(), tgt.size()));
  const double hi = static_cast<double>(std::max(src.size(), tgt.size()));
  v.details["length_ratio"] = hi / lo;
  if (hi > config.max_len_ratio * lo + config.len_slack) return fail(Rule::kLengthRatio);

  const double lr_src = letter_ratio(pair.src);
  const double lr_tgt = letter_ratio(pair.tgt);
  v.details["letter_ratio_src"] = lr_src;
  v.details["letter_ratio_tgt"] = lr_tgt;
  if (lr_src < config.min_letter_ratio || lr_tgt < config.min_letter_ratio) {
    return fail(Rule::kNonLetter);
  }

  if (langid != nullptr) {
    auto wrong = [&](const std::string& text, const std::string& expected,
                     const char* side) {
      if (expected.empty()) return false;
      const auto res = langid->classify(text);
      v.details[std::string("langid_margin_") + side] =
          res.lang == expected ? res.margin : -res.margin;
      return res.lang != expected && res.margin > config.langid_margin;
    };
    const bool bad_src = wrong(pair.src, config.expected_src_lang, "src");
    const bool bad_tgt = wrong(pair.tgt, config.expected_tgt_lang, "tgt");
    if (bad_src || bad_tgt) return fail(Rule::kWrongLanguage);
  }

  const auto overlap = content_overlap(src, tgt, lexicon);
  v.details["overlap"] = overlap.value;
  if (overlap.no_content) v.details["no_content"] = 1.0;
  if (overlap.value < config.min_overlap) return fail(Rule::kLowOverlap);
  return v;
}

std::vector<SentencePair> dedupe(std::span<const SentencePair> corpus,
                                 std::size_t* removed) {
  std::unordered_set<std::string> seen;
  seen.reserve(corpus.size());
  std::vector<SentencePair> out;
  out.reserve(corpus.size());
  std::size_t dropped = 0;
  for (const auto& p : corpus) {
    if (seen.insert(p.src + '\t' + p.tgt).second) {
      out.push_back(p);
    } else {
      ++dropped;
    }
  }
  if (removed) *removed = dropped;
  return out;
}

FilterReport& FilterReport::operator+=(const FilterReport& other) {
  input += other.input;
  kept += other.kept;
  for (std::size_t i = 0; i < kRuleCount; ++i) rejected[i] += other.rejected[i];
  return *this;
}

nlohmann::json FilterReport::to_json() const {
  nlohmann::json by_rule = nlohmann::json::object();
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    by_rule[std::string(rule_name(static_cast<Rule>(i)))] = rejected[i];
  }
  return {{"input", input},
          {"kept", kept},
          {"rejected_by_rule", by_rule},
          {"retention", retention()}};
}

FilterOutcome run_filter_pipeline(std::span<const SentencePair> corpus,
                                  const FilterConfig& config,
                                  const LangIdModel* langid,
                                  const Lexicon& lexicon, unsigned threads) {
  config.validate();
  if (langid != nullptr) {
    for (const auto* lang : {&config.expected_src_lang, &config.expected_tgt_lang}) {
      if (!lang->empty() && !langid->has_language(*lang)) {
        throw ConfigError("no language-id model for expected language " + *lang);
      }
    }
  }
  std::vector<std::optional<Rule>> failed(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    failed[i] = filter_pair(corpus[i], config, langid, lexicon).failed_rule;
  });

  FilterOutcome out;
  out.report.input = corpus.size();
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::optional<Rule> rule = failed[i];
    if (!rule && config.dedupe &&
        !seen.insert(corpus[i].src + '\t' + corpus[i].tgt).second) {
      rule = Rule::kDuplicate;
    }
    if (rule) {
      ++out.report.rejected[static_cast<std::size_t>(*rule)];
      out.rejected.push_back(corpus[i]);
      out.rejected_rules.push_back(*rule);
    } else {
      out.kept.push_back(corpus[i]);
    }
  }
  out.report.kept = out.kept.size();
  return out;
}

}  // namespace corpusforge::filters
