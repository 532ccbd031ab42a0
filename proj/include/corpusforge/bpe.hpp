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

// Byte-pair-encoding subword segmentation with optional morpheme boundary
// constraints: a merge never joins symbols across a listed boundary.

#ifndef CORPUSFORGE_BPE_HPP_
#define CORPUSFORGE_BPE_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corpusforge::bpe {

inline constexpr const char* kEndOfWord = "</w>";
inline constexpr const char* kContinuation = "@@";

// Forbidden split points per word. Position p means "between code point
// p-1 and code point p", so valid positions are 1 .. length-1.
class BoundarySet {
 public:
  void add(const std::string& word, std::set<std::size_t> positions);
  const std::set<std::size_t>* find(const std::string& word) const;
  std::size_t size() const { return map_.size(); }
  bool empty() const { return map_.empty(); }

  // `word<TAB>p1,p2,...`; blank lines are ignored.
  static BoundarySet read(std::istream& in);
  static BoundarySet load(const std::string& path);
  void write(std::ostream& out) const;

 private:
  std::map<std::string, std::set<std::size_t>> map_;
};

class MergeTable {
 public:
  using Pair = std::pair<std::string, std::string>;

  const std::vector<Pair>& merges() const { return merges_; }
  std::size_t size() const { return merges_.size(); }
  int vocab_threshold() const { return vocab_threshold_; }
  void set_vocab_threshold(int t) { vocab_threshold_ = t; }
  void push_back(Pair p);

  // Rank of a pair, or -1 when it is not in the table.
  long rank(const std::string& left, const std::string& right) const;

  // One merge per line, `left right`. A leading `#version` line is skipped.
  static MergeTable read(std::istream& in);
  static MergeTable load(const std::string& path);
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

 private:
  std::vector<Pair> merges_;
  std::unordered_map<std::string, long> ranks_;
  int vocab_threshold_ = 2;
};

// Learns up to `num_merges` merges from word frequencies. Learning stops
// early once the best pair is seen fewer than `min_frequency` times.
MergeTable train(const std::map<std::string, std::uint64_t>& word_counts,
                 std::size_t num_merges, const BoundarySet* boundaries = nullptr,
                 int min_frequency = 2);

// Word frequencies from whitespace-tokenized lines.
std::map<std::string, std::uint64_t> count_words(std::span<const std::string> lines);

// Segments one word; the last piece has no continuation marker.
std::vector<std::string> segment_word(const std::string& word, const MergeTable& table,
                                      const BoundarySet* boundaries = nullptr);

class Segmenter {
 public:
  explicit Segmenter(const MergeTable& table, const BoundarySet* boundaries = nullptr)
      : table_(table), boundaries_(boundaries) {}

  const std::vector<std::string>& word(const std::string& w);
  std::vector<std::string> apply(std::span<const std::string> tokens);
  std::string apply_line(const std::string& line);

 private:
  const MergeTable& table_;
  const BoundarySet* boundaries_;
  std::unordered_map<std::string, std::vector<std::string>> cache_;
};

std::vector<std::string> undo(std::span<const std::string> subwords);
std::string undo_line(const std::string& line);

}  // namespace corpusforge::bpe

#endif  // CORPUSFORGE_BPE_HPP_
