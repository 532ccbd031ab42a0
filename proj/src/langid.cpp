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

#include <cmath>
#include <limits>

#include "corpusforge/error.hpp"
#include "corpusforge/filters.hpp"
#include "corpusforge/unicode.hpp"

namespace corpusforge::filters {
namespace {

std::u32string to_cycle(std::string_view text) {
  std::u32string out;
  out.reserve(text.size() + 1);
  std::size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = utf8::decode(text, pos);
    out.push_back(utf8::is_space(cp) ? U' ' : utf8::to_lower(cp));
  }
  out.push_back(U' ');
  return out;
}

std::uint64_t key2(char32_t a, char32_t b) {
  return (static_cast<std::uint64_t>(a) << 21) | b;
}

std::uint64_t key3(char32_t a, char32_t b, char32_t c) {
  return (static_cast<std::uint64_t>(a) << 42) |
         (static_cast<std::uint64_t>(b) << 21) | c;
}

template <typename Map, typename Key>
std::uint64_t lookup(const Map& m, const Key& k) {
  auto it = m.find(k);
  return it == m.end() ? 0 : it->second;
}

}  // namespace

LangIdModel LangIdModel::train(
    const std::map<std::string, std::vector<std::string>>& corpora) {
  if (corpora.size() < 2) {
    throw ConfigError("language identification needs at least two languages");
  }
  LangIdModel model;
  for (const auto& [lang, sentences] : corpora) {
    PerLang m;
    bool any = false;
    for (const auto& s : sentences) {
      const std::u32string c = to_cycle(s);
      if (c.size() <= 1) continue;
      any = true;
      const std::size_t n = c.size();
      for (std::size_t i = 0; i < n; ++i) {
        const char32_t h1 = c[(i + n - 1) % n];
        const char32_t h2 = c[(i + n - 2) % n];
        m.alphabet.insert(c[i]);
        ++m.uni[c[i]];
        ++m.uni_total;
        ++m.bi[key2(h1, c[i])];
        ++m.bi_ctx[h1];
        ++m.tri[key3(h2, h1, c[i])];
        ++m.tri_ctx[key2(h2, h1)];
      }
    }
    if (!any) throw ConfigError("empty language-id seed corpus for " + lang);
    model.models_.emplace(lang, std::move(m));
  }
  return model;
}

double LangIdModel::log_prob(const PerLang& m, char32_t h2, char32_t h1,
                             char32_t c) const {
  const double v = static_cast<double>(m.alphabet.size() + 1);
  const bool known = m.alphabet.count(c) > 0;
  auto smooth = [&](std::uint64_t joint, std::uint64_t ctx) {
    return (static_cast<double>(known ? joint : 0) + kAlpha) /
           (static_cast<double>(ctx) + kAlpha * v);
  };
  const double p1 = smooth(lookup(m.uni, c), m.uni_total);
  const double p2 = smooth(lookup(m.bi, key2(h1, c)), lookup(m.bi_ctx, h1));
  const double p3 = smooth(lookup(m.tri, key3(h2, h1, c)),
                           lookup(m.tri_ctx, key2(h2, h1)));
  return std::log((p1 + p2 + p3) / 3.0);
}

double LangIdModel::prob(const std::string& lang, char32_t h2, char32_t h1,
                         char32_t c) const {
  return std::exp(log_prob(models_.at(lang), h2, h1, c));
}

std::vector<char32_t> LangIdModel::alphabet(const std::string& lang) const {
  const auto& a = models_.at(lang).alphabet;
  return {a.begin(), a.end()};
}

double LangIdModel::score(std::u32string_view c, const PerLang& m) const {
  const std::size_t n = c.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += log_prob(m, c[(i + n - 2) % n], c[(i + n - 1) % n], c[i]);
  }
  return sum / static_cast<double>(n);
}

double LangIdModel::score(std::string_view text, const std::string& lang) const {
  auto it = models_.find(lang);
  if (it == models_.end()) throw ConfigError("unknown language: " + lang);
  return score(to_cycle(text), it->second);
}

LangIdModel::Result LangIdModel::classify(std::string_view text) const {
  const std::u32string c = to_cycle(text);
  bool blank = true;
  for (char32_t cp : c) blank = blank && cp == U' ';
  if (blank) throw DataError("language identification of empty text");
  double best = -std::numeric_limits<double>::infinity();
  double second = best;
  std::string best_lang;
  for (const auto& [lang, m] : models_) {
    const double s = score(c, m);
    if (s > best) {
      second = best;
      best = s;
      best_lang = lang;
    } else if (s > second) {
      second = s;
    }
  }
  return {best_lang, best - second};
}

std::vector<std::string> LangIdModel::languages() const {
  std::vector<std::string> out;
  for (const auto& [lang, m] : models_) out.push_back(lang);
  return out;
}

}  // namespace corpusforge::filters
