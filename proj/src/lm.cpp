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

#include "corpusforge/lm.hpp"

#include <algorithm>
#include <cmath>

#include "corpusforge/error.hpp"

namespace corpusforge::lm {
namespace {

constexpr double kLn10 = 2.302585092994045684;

struct ContextStats {
  std::uint64_t total = 0;
  std::array<std::uint64_t, 4> n{};  // index 1, 2, 3 = N1, N2, N3+
};

}  // namespace

NGramKey::NGramKey(std::span<const std::uint32_t> ids) {
  words.fill(kNoWord);
  std::copy(ids.begin(), ids.end(), words.begin());
}

std::size_t NGramKeyHash::operator()(const NGramKey& k) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint32_t w : k.words) {
    h ^= w;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

Discounts estimate_discounts(const std::array<std::uint64_t, 5>& n) {
  Discounts d;
  if (n[1] == 0 || n[2] == 0 || n[3] == 0 || n[4] == 0) return d;
  const double n1 = static_cast<double>(n[1]);
  const double n2 = static_cast<double>(n[2]);
  const double n3 = static_cast<double>(n[3]);
  const double n4 = static_cast<double>(n[4]);
  const double y = n1 / (n1 + 2.0 * n2);
  const double d1 = 1.0 - 2.0 * y * n2 / n1;
  const double d2 = 2.0 - 3.0 * y * n3 / n2;
  const double d3 = 3.0 - 4.0 * y * n4 / n3;
  if (!(d1 > 0.0 && d1 <= 1.0 && d2 > 0.0 && d2 <= 2.0 && d3 > 0.0 && d3 <= 3.0)) {
    return d;
  }
  return {d1, d2, d3, false};
}

std::uint32_t NGramModel::add_word(std::string_view w) {
  auto [it, inserted] =
      index_.try_emplace(std::string(w), static_cast<std::uint32_t>(words_.size()));
  if (inserted) words_.emplace_back(w);
  return it->second;
}

std::uint32_t NGramModel::id(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? unk_ : it->second;
}

NGramModel NGramModel::train(std::span<const Tokens> corpus, int order,
                             std::uint64_t min_count) {
  if (order < 1 || order > kMaxOrder) {
    throw ConfigError("language model order must be in [1, 5]");
  }
  if (corpus.empty()) throw DataError("cannot train a language model on an empty corpus");

  std::unordered_map<std::string, std::uint64_t> raw;
  for (const auto& s : corpus) {
    for (const auto& t : s) ++raw[t];
  }

  NGramModel m;
  m.order_ = order;
  m.unk_ = m.add_word(kUnk);
  m.bos_ = m.add_word(kBos);
  m.eos_ = m.add_word(kEos);
  std::vector<std::vector<std::uint32_t>> sentences;
  sentences.reserve(corpus.size());
  for (const auto& s : corpus) {
    std::vector<std::uint32_t> ids;
    ids.reserve(s.size() + 2);
    ids.push_back(m.bos_);
    for (const auto& t : s) {
      if (t == kBos || t == kEos) {
        throw DataError("reserved symbol " + t + " in training text");
      }
      ids.push_back(raw[t] >= min_count ? m.add_word(t) : m.unk_);
    }
    ids.push_back(m.eos_);
    sentences.push_back(std::move(ids));
  }

  const auto n_orders = static_cast<std::size_t>(order);
  // adjusted[k] holds (k+1)-grams: raw counts at the top order and for
  // n-grams starting with <s>, continuation counts otherwise.
  std::vector<std::unordered_map<NGramKey, std::uint64_t, NGramKeyHash>> adjusted(n_orders);
  for (const auto& ids : sentences) {
    for (std::size_t j = 1; j < ids.size(); ++j) {
      const std::size_t start = j + 1 >= n_orders ? j + 1 - n_orders : 0;
      const std::size_t len = j - start + 1;
      if (len == n_orders || start == 0) {
        ++adjusted[len - 1][NGramKey(std::span(ids).subspan(start, len))];
      }
    }
  }
  for (std::size_t k = n_orders - 1; k >= 1; --k) {
    for (const auto& [key, count] : adjusted[k]) {
      NGramKey suffix;
      std::copy(key.words.begin() + 1, key.words.begin() + k + 1, suffix.words.begin());
      ++adjusted[k - 1][suffix];
    }
  }

  std::vector<Discounts> discounts(n_orders);
  for (std::size_t k = 0; k < n_orders; ++k) {
    std::array<std::uint64_t, 5> coc{};
    for (const auto& [key, count] : adjusted[k]) {
      if (count <= 4) ++coc[count];
    }
    discounts[k] = estimate_discounts(coc);
  }

  m.tables_.assign(n_orders, {});

  // Unigrams: interpolate with the uniform distribution over every
  // predictable word (all but <s>), which gives <unk> its mass.
  {
    const Discounts& d = discounts[0];
    ContextStats st;
    for (const auto& [key, count] : adjusted[0]) {
      st.total += count;
      ++st.n[std::min<std::uint64_t>(count, 3)];
    }
    const double total = static_cast<double>(st.total);
    const double gamma =
        (d.d1 * st.n[1] + d.d2 * st.n[2] + d.d3 * st.n[3]) / total;
    const double uniform = 1.0 / static_cast<double>(m.words_.size() - 1);
    for (std::uint32_t w = 0; w < m.words_.size(); ++w) {
      NGramKey key;
      key.words[0] = w;
      if (w == m.bos_) {
        m.tables_[0][key].log_prob = -99.0 * kLn10;
        continue;
      }
      auto it = adjusted[0].find(key);
      const std::uint64_t c = it == adjusted[0].end() ? 0 : it->second;
      const double p = std::max(static_cast<double>(c) - d(c), 0.0) / total +
                       gamma * uniform;
      m.tables_[0][key].log_prob = std::log(p);
    }
  }

  for (std::size_t k = 1; k < n_orders; ++k) {
    const Discounts& d = discounts[k];
    std::unordered_map<NGramKey, ContextStats, NGramKeyHash> stats;
    for (const auto& [key, count] : adjusted[k]) {
      NGramKey ctx;
      std::copy(key.words.begin(), key.words.begin() + k, ctx.words.begin());
      auto& st = stats[ctx];
      st.total += count;
      ++st.n[std::min<std::uint64_t>(count, 3)];
    }
    for (const auto& [key, count] : adjusted[k]) {
      NGramKey ctx;
      std::copy(key.words.begin(), key.words.begin() + k, ctx.words.begin());
      NGramKey suffix;
      std::copy(key.words.begin() + 1, key.words.begin() + k + 1, suffix.words.begin());
      const auto& st = stats.at(ctx);
      const double total = static_cast<double>(st.total);
      const double gamma =
          (d.d1 * st.n[1] + d.d2 * st.n[2] + d.d3 * st.n[3]) / total;
      auto lower = m.tables_[k - 1].find(suffix);
      if (lower == m.tables_[k - 1].end()) {
        throw Error(ErrorKind::kInternal, "missing lower-order n-gram");
      }
      const double p = (static_cast<double>(count) - d(count)) / total +
                       gamma * std::exp(lower->second.log_prob);
      m.tables_[k][key].log_prob = std::log(p);
    }
    for (const auto& [ctx, st] : stats) {
      auto it = m.tables_[k - 1].find(ctx);
      if (it == m.tables_[k - 1].end()) {
        throw Error(ErrorKind::kInternal, "missing context n-gram");
      }
      const double gamma = (d.d1 * st.n[1] + d.d2 * st.n[2] + d.d3 * st.n[3]) /
                           static_cast<double>(st.total);
      it->second.log_backoff = std::log(gamma);
      it->second.has_backoff = true;
    }
  }
  return m;
}

double NGramModel::log_prob(std::span<const std::uint32_t> context,
                            std::uint32_t word) const {
  if (word == kNoWord) return -99.0 * kLn10;
  const std::size_t max_ctx =
      std::min<std::size_t>(context.size(), static_cast<std::size_t>(order_ - 1));
  double backoff = 0.0;
  for (std::size_t k = max_ctx;; --k) {
    NGramKey key;
    std::copy(context.end() - static_cast<std::ptrdiff_t>(k), context.end(), key.words.begin());
    key.words[k] = word;
    const auto& table = tables_[k];
    if (auto it = table.find(key); it != table.end()) {
      return it->second.log_prob + backoff;
    }
    if (k == 0) break;
    key.words[k] = kNoWord;
    const auto& ctx_table = tables_[k - 1];
    if (auto it = ctx_table.find(key); it != ctx_table.end() && it->second.has_backoff) {
      backoff += it->second.log_backoff;
    }
  }
  return -99.0 * kLn10;
}

double NGramModel::sentence_log_prob(std::span<const std::string> tokens) const {
  std::vector<std::uint32_t> ids;
  ids.reserve(tokens.size() + 2);
  ids.push_back(bos_);
  for (const auto& t : tokens) ids.push_back(id(t));
  ids.push_back(eos_);
  double sum = 0.0;
  const std::size_t n_ctx = static_cast<std::size_t>(order_ - 1);
  for (std::size_t i = 1; i < ids.size(); ++i) {
    const std::size_t start = i > n_ctx ? i - n_ctx : 0;
    sum += log_prob(std::span(ids).subspan(start, i - start), ids[i]);
  }
  return sum;
}

double NGramModel::total_probability(std::span<const std::uint32_t> context) const {
  double sum = 0.0;
  for (std::uint32_t w = 0; w < words_.size(); ++w) {
    if (w == bos_) continue;
    sum += std::exp(log_prob(context, w));
  }
  return sum;
}

std::vector<std::vector<std::uint32_t>> NGramModel::contexts(int n) const {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& [key, e] : tables_.at(n - 1)) {
    if (e.has_backoff) out.emplace_back(key.words.begin(), key.words.begin() + n);
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [&](std::uint32_t x, std::uint32_t y) { return words_[x] < words_[y]; });
  });
  return out;
}

double cross_entropy(std::span<const std::string> tokens, const NGramModel& model) {
  return -model.sentence_log_prob(tokens) / static_cast<double>(tokens.size() + 1);
}

double perplexity(std::span<const Tokens> corpus, const NGramModel& model) {
  double nll = 0.0;
  std::uint64_t events = 0;
  for (const auto& s : corpus) {
    nll -= model.sentence_log_prob(s);
    events += s.size() + 1;
  }
  if (events == 0) return 1.0;
  return std::exp(nll / static_cast<double>(events));
}

}  // namespace corpusforge::lm
