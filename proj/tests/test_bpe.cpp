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

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "corpusforge/bpe.hpp"
#include "corpusforge/corpus.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/rng.hpp"
#include "corpusforge/unicode.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace corpusforge;
using namespace corpusforge::bpe;

namespace {

std::string random_word(Rng& rng) {
  static const std::vector<std::string> letters = {"a", "b", "c", "d", "e", "k", "o", "s", "t",
                                                   "\xc4\x85", "\xc5\xbc", "\xc3\xb3"};
  std::string w;
  const auto n = 1 + rng.below(10);
  for (std::uint64_t i = 0; i < n; ++i) w += letters[rng.below(letters.size())];
  return w;
}

// Character offsets where each piece starts, plus the end.
std::vector<std::size_t> piece_offsets(const std::vector<std::string>& pieces) {
  std::vector<std::size_t> offsets = {0};
  for (const auto& p : pieces) {
    std::string core = p;
    if (core.size() >= 2 && core.compare(core.size() - 2, 2, "@@") == 0) core.resize(core.size() - 2);
    offsets.push_back(offsets.back() + utf8::length(core));
  }
  return offsets;
}

}  // namespace

TEST_CASE("a single dominant pair is merged first") {
  auto counts = count_words(std::vector<std::string>{"aa aa aa"});
  auto table = train(counts, 1);
  REQUIRE(table.size() == 1);
  CHECK(table.merges()[0] == MergeTable::Pair{"a", "a</w>"});
}

TEST_CASE("low lower lowest merges follow the hand trace") {
  auto lines = cftest::read_lines(cftest::data_path("bpe_low.txt"));
  auto table = train(count_words(lines), 100);
  std::ostringstream out;
  table.write(out);
  CHECK(out.str() == cftest::read_text(cftest::data_path("bpe_low.golden")));
}

TEST_CASE("training stops below the minimum pair frequency") {
  auto counts = count_words(std::vector<std::string>{"ab cd"});
  CHECK(train(counts, 10).size() == 0);
  CHECK(train(counts, 10, nullptr, 1).size() == 2);
  CHECK_THROWS_AS(train(counts, 0), ConfigError);
  CHECK_THROWS_AS(train({}, 5), DataError);
}

TEST_CASE("training is deterministic") {
  Rng rng(3);
  std::vector<std::string> lines;
  for (int i = 0; i < 300; ++i) lines.push_back(random_word(rng) + " " + random_word(rng));
  auto a = train(count_words(lines), 200);
  auto b = train(count_words(lines), 200);
  CHECK(a.merges() == b.merges());
}

TEST_CASE("apply: unknown words split into characters, known words merge") {
  auto table = train(count_words(cftest::read_lines(cftest::data_path("bpe_low.txt"))), 100);
  CHECK(segment_word("xyz", table) == std::vector<std::string>{"x@@", "y@@", "z"});
  CHECK(segment_word("lowest", table) == std::vector<std::string>{"lowest"});
  CHECK(segment_word("lows", table) == std::vector<std::string>{"low@@", "s"});
  CHECK(segment_word("a", table) == std::vector<std::string>{"a"});
  Segmenter seg(table);
  CHECK(seg.apply_line("low xyz") == "low x@@ y@@ z");
}

TEST_CASE("undo concatenates continuation pieces") {
  CHECK(undo(std::vector<std::string>{"un@@", "known"}) == std::vector<std::string>{"unknown"});
  CHECK(undo_line("x@@ y@@ z w") == "xyz w");
  CHECK(undo(std::vector<std::string>{}).empty());
}

TEST_CASE("undo after apply is the identity on random words") {
  Rng rng(5);
  std::vector<std::string> train_lines;
  for (int i = 0; i < 2000; ++i) train_lines.push_back(random_word(rng));
  auto table = train(count_words(train_lines), 500);
  Segmenter seg(table);
  for (int i = 0; i < 10000; ++i) {
    const std::string w = random_word(rng);
    CHECK(undo(seg.word(w)) == std::vector<std::string>{w});
  }
}

TEST_CASE("boundaries are never crossed") {
  BoundarySet bounds;
  bounds.add("playing", {4});
  std::map<std::string, std::uint64_t> counts = {{"playing", 50}, {"ying", 40}, {"play", 30}};
  auto table = train(counts, 100, &bounds);
  auto pieces = segment_word("playing", table, &bounds);
  CHECK(pieces == std::vector<std::string>{"play@@", "ing"});
  // A table learned without the constraint joins the word whole, and
  // applying it with the constraint still splits at the boundary.
  auto free_table = train(counts, 100);
  CHECK(segment_word("playing", free_table) == std::vector<std::string>{"playing"});
  const auto constrained = segment_word("playing", free_table, &bounds);
  const auto offsets = piece_offsets(constrained);
  CHECK(std::find(offsets.begin(), offsets.end(), 4u) != offsets.end());
  CHECK(undo(constrained) == std::vector<std::string>{"playing"});
  CHECK_THROWS_AS(bounds.add("play", {0}), DataError);
  CHECK_THROWS_AS(bounds.add("play", {4}), DataError);
}

TEST_CASE("constrained fixture of a thousand words respects every boundary") {
  const std::vector<std::string> stems = {"play", "walk", "talk", "jump", "read", "work",
                                          "kot", "dom", "las", "\xc5\xbc\xc3\xb3\xc5\x82w"};
  const std::vector<std::string> suffixes = {"ing", "ed", "er", "ers", "s", "ami", "ach", "owi",
                                             "ową", "ness"};
  Rng rng(8);
  BoundarySet bounds;
  std::map<std::string, std::uint64_t> counts;
  std::vector<std::string> words;
  for (int i = 0; i < 1000; ++i) {
    std::string stem = stems[rng.below(stems.size())];
    if (rng.below(3) == 0) stem += stems[rng.below(stems.size())];
    const std::string suffix = suffixes[rng.below(suffixes.size())];
    const std::string word = stem + suffix;
    const std::size_t b = utf8::length(stem);
    bounds.add(word, {b});
    counts[word] += 1 + rng.below(5);
    words.push_back(word);
  }
  auto table = train(counts, 400, &bounds);
  CHECK(table.size() > 50);
  Segmenter seg(table, &bounds);
  for (const auto& w : words) {
    const auto& pieces = seg.word(w);
    const auto offsets = piece_offsets(pieces);
    const auto& forbidden = *bounds.find(w);
    for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
      for (std::size_t p : forbidden) {
        CHECK_FALSE((offsets[i] < p && p < offsets[i + 1]));
      }
    }
    CHECK(undo(pieces) == std::vector<std::string>{w});
  }
}

TEST_CASE("boundary and merge files round trip") {
  std::stringstream ss("playing\t4\nunknown\t2,5\n\n");
  auto bounds = BoundarySet::read(ss);
  CHECK(bounds.size() == 2);
  CHECK(*bounds.find("unknown") == std::set<std::size_t>{2, 5});
  std::stringstream out;
  bounds.write(out);
  CHECK(out.str() == "playing\t4\nunknown\t2,5\n");
  std::stringstream bad("word\tx\n");
  CHECK_THROWS_AS(BoundarySet::read(bad), DataError);

  std::stringstream codes("#version: 0.2\nl o\nlo w</w>\n");
  auto table = MergeTable::read(codes);
  CHECK(table.size() == 2);
  CHECK(table.rank("lo", "w</w>") == 1);
  CHECK(table.rank("x", "y") == -1);
  std::stringstream malformed("a b c\n");
  CHECK_THROWS_AS(MergeTable::read(malformed), DataError);
}
