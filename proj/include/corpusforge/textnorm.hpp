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

// Pre-processing: punctuation normalization, placeholder masking for
// non-translatable spans, rule-based tokenization and truecasing.

#ifndef CORPUSFORGE_TEXTNORM_HPP_
#define CORPUSFORGE_TEXTNORM_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"

namespace corpusforge::textnorm {

using Tokens = std::vector<std::string>;

// Maps typographic quotes, apostrophes and dashes to ASCII, decodes HTML
// entities, turns NBSP into a space, collapses whitespace runs and trims.
// Idempotent; invalid UTF-8 bytes become U+FFFD.
std::string normalize(std::string_view text);

enum class PlaceholderKind { kEmail, kUrl, kTag };

std::string_view kind_name(PlaceholderKind kind);

struct PlaceholderSlot {
  PlaceholderKind kind = PlaceholderKind::kUrl;
  int index = 0;  // per-kind, starting at 1
  std::string original;

  bool operator==(const PlaceholderSlot&) const = default;
};

struct PlaceholderMap {
  std::vector<PlaceholderSlot> slots;

  bool empty() const { return slots.empty(); }
  nlohmann::json to_json() const;
  static PlaceholderMap from_json(const nlohmann::json& j);
};

struct Masked {
  std::string text;
  PlaceholderMap map;
};

// Replaces e-mail addresses, URLs and XML tags by `__EMAIL_n__`,
// `__URL_n__` and `__TAG_n__`. At each position the longest match wins;
// scanning is left to right.
Masked mask_placeholders(std::string_view text);

struct Unmasked {
  std::string text;
  std::size_t unused_slots = 0;
};

// Inverse of mask_placeholders. Throws DataError naming the placeholder if
// one has no slot; slots never referenced are counted in unused_slots.
Unmasked unmask(std::string_view text, const PlaceholderMap& map);

Tokens tokenize(std::string_view text);
std::string detokenize(std::span<const std::string> tokens);

// Splits on single spaces; empty fields are dropped.
Tokens split_tokens(std::string_view line);
std::string join_tokens(std::span<const std::string> tokens);

// Frequency-argmax truecaser. Counts come only from non-sentence-initial
// positions; ties go to the form seen first.
class TruecaseModel {
 public:
  static TruecaseModel train(std::span<const Tokens> corpus);

  // Incremental training: observe every sentence, then finalize().
  void observe(std::span<const std::string> sentence);
  void finalize();

  Tokens apply(std::span<const std::string> tokens) const;

  const std::unordered_map<std::string, std::string>& table() const {
    return table_;
  }
  const std::unordered_map<std::string, std::uint64_t>& counts() const {
    return counts_;
  }

  // `surface<TAB>count` lines ordered by key, then count descending, then
  // first-seen order; load() takes the first line of each key as argmax.
  void save(const std::filesystem::path& path) const;
  static TruecaseModel load(const std::filesystem::path& path);

 private:
  std::unordered_map<std::string, std::uint64_t> counts_;
  std::unordered_map<std::string, std::uint64_t> first_seen_;
  std::unordered_map<std::string, std::string> table_;
  std::uint64_t position_ = 0;
};

Tokens detruecase(std::span<const std::string> tokens);

}  // namespace corpusforge::textnorm

#endif  // CORPUSFORGE_TEXTNORM_HPP_
