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

#include <string>
#include <vector>

#include "corpusforge/augment.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/rng.hpp"
#include "corpusforge/textnorm.hpp"
#include "doctest.h"

using namespace corpusforge;
using namespace corpusforge::augment;

namespace {

std::vector<SentencePair> random_corpus(std::size_t n, std::uint64_t seed) {
  const std::vector<std::string> words = {"the", "cat", "dog", "a", "house", ",", ".", "42",
                                          "runs", "of", "big", "kot", "pies", "i", "x1",
                                          "\xc5\xbc\xc3\xb3\xc5\x82w"};
  Rng rng(seed);
  std::vector<SentencePair> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto side = [&] {
      std::string s;
      for (std::uint64_t k = 0, len = 1 + rng.below(12); k < len; ++k) {
        if (k) s += ' ';
        s += words[rng.below(words.size())];
      }
      return s;
    };
    out.push_back({i, side(), side(), ""});
  }
  return out;
}

int count_unk(const std::string& line, const std::string& unk) {
  int n = 0;
  for (const auto& t : textnorm::split_tokens(line)) n += t == unk;
  return n;
}

}  // namespace

TEST_CASE("content words are multi-letter non-stopwords") {
  const std::set<std::string> stop = {"the", "and"};
  CHECK(is_content_word("cat", stop));
  CHECK(is_content_word("\xc5\xbc\xc3\xb3\xc5\x82w", stop));
  CHECK_FALSE(is_content_word("The", stop));
  CHECK_FALSE(is_content_word("a", stop));
  CHECK_FALSE(is_content_word("x1", stop));
  CHECK_FALSE(is_content_word(",", stop));
  CHECK_FALSE(is_content_word("42", stop));
}

TEST_CASE("k is clamped to the available content words") {
  AugmentConfig c;
  c.k_min = c.k_max = 3;
  std::vector<SentencePair> one = {{0, "a cat .", "kot !", ""}};
  auto r = unk_augment(one, c);
  REQUIRE(r.synthetic.size() == 1);
  CHECK(r.synthetic[0].src == "a <unk> .");
  CHECK(r.synthetic[0].tgt == "<unk> !");
  CHECK(r.synthetic[0].origin == "unk");
}

TEST_CASE("pairs without content words on a side are skipped") {
  AugmentConfig c;
  std::vector<SentencePair> pairs = {{0, "a , .", "kot", ""}, {1, "cat", "dog", ""}};
  auto r = unk_augment(pairs, c);
  CHECK(r.skipped == 1);
  REQUIRE(r.synthetic.size() == 1);
  CHECK(r.synthetic[0].id == 1);
}

TEST_CASE("fixed seed gives identical output, other seeds differ") {
  auto corpus = random_corpus(500, 1);
  AugmentConfig c;
  c.seed = 9;
  auto a = unk_augment(corpus, c);
  auto b = unk_augment(corpus, c);
  CHECK(a.synthetic == b.synthetic);
  c.seed = 10;
  CHECK(unk_augment(corpus, c).synthetic != a.synthetic);
}

TEST_CASE("output does not depend on thread count") {
  auto corpus = random_corpus(3000, 2);
  AugmentConfig c;
  c.output_ratio = 2;
  CHECK(unk_augment(corpus, c, 1).synthetic == unk_augment(corpus, c, 8).synthetic);
}

TEST_CASE("synthetic pairs differ only at replaced content positions") {
  auto corpus = random_corpus(10000, 3);
  AugmentConfig c;
  c.src_stopwords = {"the", "of"};
  c.tgt_stopwords = {"the", "of"};
  auto r = unk_augment(corpus, c);
  CHECK(r.synthetic.size() + r.skipped == corpus.size());
  for (const auto& s : r.synthetic) {
    const auto& orig = corpus[s.id];
    for (int side = 0; side < 2; ++side) {
      const auto a = textnorm::split_tokens(side == 0 ? orig.src : orig.tgt);
      const auto b = textnorm::split_tokens(side == 0 ? s.src : s.tgt);
      const auto& stop = side == 0 ? c.src_stopwords : c.tgt_stopwords;
      REQUIRE(a.size() == b.size());
      int replaced = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
          CHECK(b[i] == "<unk>");
          CHECK(is_content_word(a[i], stop));
          ++replaced;
        }
      }
      CHECK(replaced >= 1);
      CHECK(replaced <= 3);
    }
  }
}

TEST_CASE("output ratio multiplies the synthetic count") {
  auto corpus = random_corpus(400, 4);
  AugmentConfig c;
  const auto base = unk_augment(corpus, c);
  c.output_ratio = 3;
  const auto triple = unk_augment(corpus, c);
  CHECK(triple.synthetic.size() == 3 * base.synthetic.size());
  CHECK(triple.skipped == base.skipped);
  c.output_ratio = 0;
  CHECK(unk_augment(corpus, c).synthetic.empty());
}

TEST_CASE("unk counts per side stay within k bounds") {
  auto corpus = random_corpus(2000, 5);
  AugmentConfig c;
  c.k_min = 2;
  c.k_max = 2;
  c.unk_token = "<UNK>";
  for (const auto& s : unk_augment(corpus, c).synthetic) {
    const int src = count_unk(s.src, "<UNK>");
    const int tgt = count_unk(s.tgt, "<UNK>");
    CHECK(src >= 1);
    CHECK(src <= 2);
    CHECK(tgt >= 1);
    CHECK(tgt <= 2);
  }
}

TEST_CASE("augment configuration validation") {
  AugmentConfig c;
  c.k_min = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.k_min = 3;
  c.k_max = 2;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  AugmentConfig d;
  d.unk_token = "a b";
  CHECK_THROWS_AS(d.validate(), ConfigError);
}
