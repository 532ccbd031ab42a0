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

#include "corpusforge/augment.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include "corpusforge/error.hpp"
#include "corpusforge/parallel.hpp"
#include "corpusforge/rng.hpp"
#include "corpusforge/textnorm.hpp"
#include "corpusforge/unicode.hpp"

namespace corpusforge::augment {

void AugmentConfig::validate() const {
  if (k_min < 1 || k_max < k_min) throw ConfigError("need 1 <= k_min <= k_max");
  if (output_ratio < 0) throw ConfigError("output_ratio must be non-negative");
  if (unk_token.empty() || unk_token.find_first_of(" \t\r\n") != std::string::npos) {
    throw ConfigError("unk_token must be a single non-empty token");
  }
}

bool is_content_word(const std::string& token, const std::set<std::string>& stopwords) {
  std::size_t pos = 0;
  std::size_t n = 0;
  while (pos < token.size()) {
    if (!utf8::is_letter(utf8::decode(token, pos))) return false;
    ++n;
  }
  if (n < 2) return false;
  return stopwords.empty() || stopwords.count(utf8::lower(token)) == 0;
}

namespace {

std::vector<std::size_t> content_positions(const std::vector<std::string>& tokens,
                                           const std::set<std::string>& stopwords) {
  std::vector<std::size_t> pos;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_content_word(tokens[i], stopwords)) pos.push_back(i);
  }
  return pos;
}

std::string replace(std::vector<std::string> tokens, const std::vector<std::size_t>& content,
                    std::size_t k, const std::string& unk, Rng& rng) {
  for (std::size_t pick : rng.sample(content.size(), std::min(k, content.size()))) {
    tokens[content[pick]] = unk;
  }
  return textnorm::join_tokens(tokens);
}

}  // namespace

AugmentResult unk_augment(std::span<const SentencePair> pairs, const AugmentConfig& config,
                          unsigned threads) {
  config.validate();
  const std::size_t ratio = static_cast<std::size_t>(config.output_ratio);
  // Slot i * ratio + r holds copy r of pair i, or stays empty when skipped.
  std::vector<std::optional<SentencePair>> slots(pairs.size() * ratio);
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto& p = pairs[i];
    const auto src = textnorm::split_tokens(p.src);
    const auto tgt = textnorm::split_tokens(p.tgt);
    const auto src_content = content_positions(src, config.src_stopwords);
    const auto tgt_content = content_positions(tgt, config.tgt_stopwords);
    if (src_content.empty() || tgt_content.empty()) return;
    for (std::size_t r = 0; r < ratio; ++r) {
      Rng rng = Rng::for_record(Rng::mix(config.seed) + r, p.id);
      const auto k = static_cast<std::size_t>(
          rng.between(static_cast<std::uint64_t>(config.k_min),
                      static_cast<std::uint64_t>(config.k_max)));
      SentencePair out;
      out.id = p.id;
      out.origin = "unk";
      out.src = replace(src, src_content, k, config.unk_token, rng);
      out.tgt = replace(tgt, tgt_content, k, config.unk_token, rng);
      slots[i * ratio + r] = std::move(out);
    }
  });
  AugmentResult result;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (ratio > 0 && !slots[i * ratio]) {
      ++result.skipped;
      continue;
    }
    for (std::size_t r = 0; r < ratio; ++r) result.synthetic.push_back(*slots[i * ratio + r]);
  }
  return result;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword list " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& w : textnorm::split_tokens(line)) words.insert(utf8::lower(w));
  }
  return words;
}

}  // namespace corpusforge::augment
