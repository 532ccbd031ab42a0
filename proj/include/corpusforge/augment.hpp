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

// Synthetic pairs with content words replaced by an unknown-word token.

#ifndef CORPUSFORGE_AUGMENT_HPP_
#define CORPUSFORGE_AUGMENT_HPP_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "corpusforge/corpus.hpp"

namespace corpusforge::augment {

struct AugmentConfig {
  int k_min = 1;
  int k_max = 3;
  std::string unk_token = "<unk>";
  std::set<std::string> src_stopwords;  // lowercase
  std::set<std::string> tgt_stopwords;
  std::uint64_t seed = 1;
  int output_ratio = 1;

  void validate() const;
};

// Alphabetic, at least two code points, not a stopword (case-insensitive).
bool is_content_word(const std::string& token, const std::set<std::string>& stopwords);

struct AugmentResult {
  std::vector<SentencePair> synthetic;  // origin "unk"
  std::uint64_t skipped = 0;            // inputs without content words on a side
};

// Pairs are whitespace-tokenized. Randomness depends only on (seed, pair id,
// copy index), never on position in the input or on sharding.
AugmentResult unk_augment(std::span<const SentencePair> pairs, const AugmentConfig& config,
                          unsigned threads = 1);

std::set<std::string> load_stopwords(const std::string& path);

}  // namespace corpusforge::augment

#endif  // CORPUSFORGE_AUGMENT_HPP_
