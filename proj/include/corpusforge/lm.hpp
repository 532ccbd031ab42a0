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

// Interpolated modified Kneser-Ney n-gram language model.
//
// The model is held in back-off form: every stored n-gram carries its
// interpolated log-probability and, when it is a context of a longer
// n-gram, its log back-off weight. Scores are natural logs; ARPA files use
// log10 at the file boundary only.

#ifndef CORPUSFORGE_LM_HPP_
#define CORPUSFORGE_LM_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace corpusforge::lm {

inline constexpr int kMaxOrder = 5;
inline constexpr std::uint32_t kNoWord = std::numeric_limits<std::uint32_t>::max();
inline constexpr std::string_view kUnk = "<unk>";
inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";

using Tokens = std::vector<std::string>;

struct NGramKey {
  std::array<std::uint32_t, kMaxOrder> words;
  NGramKey() { words.fill(kNoWord); }
  explicit NGramKey(std::span<const std::uint32_t> ids);
  bool operator==(const NGramKey&) const = default;
};

struct NGramKeyHash {
  std::size_t operator()(const NGramKey& k) const noexcept;
};

class NGramModel {
 public:
  struct Entry {
    double log_prob = 0.0;
    double log_backoff = 0.0;
    bool has_backoff = false;
  };

  // Tokens occurring fewer than `min_count` times become <unk>.
  static NGramModel train(std::span<const Tokens> corpus, int order = 4,
                          std::uint64_t min_count = 1);

  int order() const { return order_; }
  std::size_t vocab_size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  std::uint32_t bos() const { return bos_; }
  std::uint32_t eos() const { return eos_; }
  std::uint32_t unk() const { return unk_; }

  // Id of `word`; OOV words map to <unk> (kNoWord if the model has none).
  std::uint32_t id(std::string_view word) const;

  // ln P(word | context); only the last order-1 context ids are used.
  double log_prob(std::span<const std::uint32_t> context,
                  std::uint32_t word) const;

  // Sum of ln P over the T tokens and the end-of-sentence event.
  double sentence_log_prob(std::span<const std::string> tokens) const;

  // Sum of P(w | context) over every predictable word (all but <s>).
  double total_probability(std::span<const std::uint32_t> context) const;

  std::size_t ngram_count(int n) const { return tables_.at(n - 1).size(); }
  // N-grams of length n that carry a back-off weight, in sorted word order.
  std::vector<std::vector<std::uint32_t>> contexts(int n) const;
  const std::unordered_map<NGramKey, Entry, NGramKeyHash>& table(int n) const {
    return tables_.at(n - 1);
  }

  void write_arpa(std::ostream& out) const;
  static NGramModel read_arpa(std::istream& in);
  void save_arpa(const std::filesystem::path& path) const;
  static NGramModel load_arpa(const std::filesystem::path& path);

 private:
  std::uint32_t add_word(std::string_view w);

  int order_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::uint32_t bos_ = kNoWord;
  std::uint32_t eos_ = kNoWord;
  std::uint32_t unk_ = kNoWord;
  std::vector<std::unordered_map<NGramKey, Entry, NGramKeyHash>> tables_;
};

// Per-token cross-entropy in nats: -(1/(T+1)) * sentence_log_prob.
double cross_entropy(std::span<const std::string> tokens, const NGramModel& model);

// exp(total negative log-probability / total predicted events).
double perplexity(std::span<const Tokens> corpus, const NGramModel& model);

// Modified Kneser-Ney discounts for one order, from count-of-counts.
struct Discounts {
  double d1 = 0.75;
  double d2 = 0.75;
  double d3 = 0.75;
  bool fallback = true;

  double operator()(std::uint64_t count) const {
    return count == 0 ? 0.0 : count == 1 ? d1 : count == 2 ? d2 : d3;
  }
};

// n[k] = number of n-grams with adjusted count k, for k = 1..4 (n[0] unused).
Discounts estimate_discounts(const std::array<std::uint64_t, 5>& n);

}  // namespace corpusforge::lm

#endif  // CORPUSFORGE_LM_HPP_
