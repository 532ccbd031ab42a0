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
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "corpusforge/error.hpp"
#include "corpusforge/lm.hpp"
#include "corpusforge/rng.hpp"
#include "corpusforge/select.hpp"
#include "doctest.h"

using namespace corpusforge;
using namespace corpusforge::select;

namespace {

std::vector<SentencePair> make_pairs(std::size_t n, const std::string& tag) {
  std::vector<SentencePair> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({i, tag + std::to_string(i), "t" + std::to_string(i), ""});
  return out;
}

std::size_t count_origin(const Mixture& m, const std::string& origin) {
  return static_cast<std::size_t>(std::count_if(
      m.pairs.begin(), m.pairs.end(), [&](const SentencePair& p) { return p.origin == origin; }));
}

}  // namespace

TEST_CASE("dual score examples") {
  CHECK(dccef_score(0, 0).dual == 1.0);
  CHECK(dccef_score(1, 1).dual == doctest::Approx(0.36787944117144233).epsilon(1e-15));
  CHECK(dccef_score(2, 0).dual == doctest::Approx(0.049787068367863944).epsilon(1e-15));
  CHECK(dccef_score(0, 2).dual == dccef_score(2, 0).dual);
  CHECK(!dccef_score(1, 1).dom_weight);
  CHECK(dccef_score(1, 1).final_score == dccef_score(1, 1).dual);
  CHECK_THROWS_AS(dccef_score(-0.1, 1), ConfigError);
}

TEST_CASE("domain weight is clamped at one and multiplies the dual score") {
  auto in_domain = dccef_score(1, 1, 2.0, 3.0);
  CHECK(*in_domain.dom_weight == 1.0);
  CHECK(in_domain.final_score == in_domain.dual);
  auto out_domain = dccef_score(1, 1, 3.0, 2.0);
  CHECK(*out_domain.dom_weight == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(out_domain.final_score == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
}

TEST_CASE("dual score closed form and monotonicity on random pairs") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double a = 5 * rng.uniform();
    const double b = 5 * rng.uniform();
    const auto s = dccef_score(a, b);
    const double gap = a > b ? a - b : b - a;
    const double ref = std::exp(-(gap + (a + b) / 2));
    CHECK(std::abs(s.dual - ref) <= 1e-12);
    CHECK(s.dual > 0.0);
    CHECK(s.dual <= 1.0);
    // Same sum, wider gap.
    const double sum = a + b;
    const double wider = std::min(gap + 0.1, sum);
    if (wider > gap) {
      CHECK(dccef_score((sum + wider) / 2, (sum - wider) / 2).dual < dccef_score((sum + gap) / 2, (sum - gap) / 2).dual);
    }
    // Same gap, larger sum.
    CHECK(dccef_score(a + 0.05, b + 0.05).dual < s.dual);
  }
}

TEST_CASE("keep fraction keeps the top scores in input order") {
  std::vector<DccefScore> scores;
  for (double v : {0.5, 0.9, 0.1, 0.7, 0.3, 0.8, 0.2, 0.6, 0.4, 0.05}) {
    DccefScore s;
    s.final_score = v;
    scores.push_back(s);
  }
  CHECK(dccef_select(scores, KeepFraction{0.3}) == std::vector<std::size_t>{1, 3, 5});
  auto all = dccef_select(scores, KeepFraction{1.0});
  CHECK(all.size() == 10);
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(dccef_select(scores, KeepThreshold{0.6}) == std::vector<std::size_t>{1, 3, 5, 7});
  CHECK_THROWS_AS(dccef_select(scores, KeepFraction{0.0}), ConfigError);
  CHECK_THROWS_AS(dccef_select(scores, KeepFraction{1.1}), ConfigError);
  CHECK_THROWS_AS(dccef_select(scores, KeepThreshold{1.5}), ConfigError);
}

TEST_CASE("keep fraction breaks ties toward lower ids") {
  std::vector<DccefScore> scores(6);
  for (auto& s : scores) s.final_score = 0.5;
  CHECK(dccef_select(scores, KeepFraction{0.5}) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("keep fraction agrees with a brute-force sort") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<DccefScore> scores(n);
    for (auto& s : scores) s.final_score = static_cast<double>(rng.below(10)) / 10.0;
    const double f = (1 + static_cast<double>(rng.below(100))) / 100.0;
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < n; ++i) ranked.push_back({-scores[i].final_score, i});
    std::sort(ranked.begin(), ranked.end());
    std::size_t k = 0;
    while (static_cast<double>(k) < f * static_cast<double>(n) - 1e-9) ++k;
    std::vector<std::size_t> expected;
    for (std::size_t i = 0; i < k; ++i) expected.push_back(ranked[i].second);
    std::sort(expected.begin(), expected.end());
    CHECK(dccef_select(scores, KeepFraction{f}) == expected);
  }
}

TEST_CASE("dccef_filter requires one score per pair") {
  auto pairs = make_pairs(3, "s");
  std::vector<DccefScore> two(2);
  CHECK_THROWS_AS(dccef_filter(pairs, two, KeepFraction{1.0}), DataError);
}

TEST_CASE("monolingual scores") {
  std::vector<lm::Tokens> in = {{"goal", "match", "team"}, {"team", "wins", "match"}};
  std::vector<lm::Tokens> out = {{"stock", "market", "falls"}, {"bank", "rates", "rise"}};
  auto lm_in = lm::NGramModel::train(in, 2);
  auto lm_out = lm::NGramModel::train(out, 2);
  lm::Tokens s = {"team", "match"};
  CHECK(mono_score(s, lm_in, lm_in).combined == 0.0);
  auto fwd = mono_score(s, lm_in, lm_out);
  auto rev = mono_score(s, lm_out, lm_in);
  CHECK(fwd.combined == -rev.combined);
  CHECK(fwd.combined == fwd.h_out - fwd.h_in);
  CHECK(fwd.combined > 0.0);
}

TEST_CASE("in-domain sentences score positive on average") {
  Rng rng(13);
  auto sentence = [&](int base) {
    lm::Tokens s;
    for (int k = 0; k < 8; ++k) s.push_back("d" + std::to_string(base) + "_" + std::to_string(rng.below(50)));
    return s;
  };
  std::vector<lm::Tokens> in, out, probe;
  for (int i = 0; i < 1000; ++i) in.push_back(sentence(0));
  for (int i = 0; i < 1000; ++i) out.push_back(sentence(1));
  for (int i = 0; i < 1000; ++i) probe.push_back(sentence(0));
  auto lm_in = lm::NGramModel::train(in, 3);
  auto lm_out = lm::NGramModel::train(out, 3);
  double sum = 0;
  for (const auto& s : probe) sum += mono_score(s, lm_in, lm_out).combined;
  CHECK(sum / 1000 > 0.0);
}

TEST_CASE("monolingual selection strategies") {
  std::vector<MonoScore> all_negative(5);
  for (auto& s : all_negative) s.combined = -1;
  CHECK(select_mono(all_negative, CombinedThreshold{0.0}).indices.empty());

  std::vector<MonoScore> scores(4);
  const double h[] = {5.0, 1.0, 2.0, 9.0};
  for (int i = 0; i < 4; ++i) scores[i].h_in = h[i];
  CHECK(select_mono(scores, InDomainTop{3}).indices == std::vector<std::size_t>{0, 1, 2});
  auto big = select_mono(scores, InDomainTop{10});
  CHECK(big.indices.size() == 4);
  CHECK(big.truncated_request);
}

TEST_CASE("threshold selection is pointwise under permutation") {
  Rng rng(15);
  std::vector<MonoScore> scores(200);
  for (auto& s : scores) s.combined = rng.normal();
  std::vector<std::size_t> perm(scores.size());
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  std::vector<MonoScore> permuted;
  for (auto i : perm) permuted.push_back(scores[i]);
  auto base = select_mono(scores, CombinedThreshold{0.0}).indices;
  auto moved = select_mono(permuted, CombinedThreshold{0.0}).indices;
  std::vector<std::size_t> mapped;
  for (auto j : moved) mapped.push_back(perm[j]);
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == base);
}

TEST_CASE("mixture arithmetic examples") {
  auto bit = make_pairs(100, "b");
  auto syn = make_pairs(1000, "s");
  std::vector<double> scores(1000);
  for (std::size_t i = 0; i < scores.size(); ++i) scores[i] = static_cast<double>(i % 37);

  auto cut = build_mixture(bit, syn, {MixStrategy::kCutoff, 1, 2, 1}, scores);
  CHECK(cut.pairs.size() == 300);
  CHECK(count_origin(cut, "synthetic") == 200);

  auto up = build_mixture(bit, syn, {MixStrategy::kUpsampled, 1, 1, 1});
  CHECK(count_origin(up, "bitext") == 1000);
  std::map<std::string, int> copies;
  for (const auto& p : up.pairs) {
    if (p.origin == "bitext") ++copies[p.src];
  }
  for (const auto& [src, n] : copies) CHECK(n == 10);

  auto orig = build_mixture(bit, syn, {MixStrategy::kOriginalRatio, 1, 1, 1});
  CHECK(orig.pairs.size() == 1100);
}

TEST_CASE("cutoff keeps the best-scoring synthetic pairs") {
  auto bit = make_pairs(4, "b");
  auto syn = make_pairs(10, "s");
  std::vector<double> scores = {0, 9, 1, 8, 2, 7, 3, 6, 4, 5};
  auto mix = build_mixture(bit, syn, {MixStrategy::kCutoff, 2, 3, 5}, scores);
  std::vector<std::string> kept;
  for (const auto& p : mix.pairs) {
    if (p.origin == "synthetic") kept.push_back(p.src);
  }
  std::sort(kept.begin(), kept.end());
  CHECK(kept == std::vector<std::string>{"s1", "s3", "s5", "s7", "s8", "s9"});
}

TEST_CASE("mixture arithmetic holds for random sizes") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n_bit = 1 + rng.below(50);
    const std::size_t n_syn = 1 + rng.below(400);
    auto bit = make_pairs(n_bit, "b");
    auto syn = make_pairs(n_syn, "s");
    std::vector<double> scores(n_syn);
    for (auto& s : scores) s = rng.uniform();
    const std::uint64_t a = 1 + rng.below(3), b = 1 + rng.below(3);

    auto orig = build_mixture(bit, syn, {MixStrategy::kOriginalRatio, 1, 1, trial + 1u});
    CHECK(orig.pairs.size() == n_bit + n_syn);

    if (n_syn >= n_bit) {
      auto up = build_mixture(bit, syn, {MixStrategy::kUpsampled, 1, 1, trial + 1u});
      CHECK(count_origin(up, "bitext") == n_syn);
      CHECK(count_origin(up, "synthetic") == n_syn);
      std::map<std::string, std::size_t> copies;
      for (const auto& p : up.pairs) {
        if (p.origin == "bitext") ++copies[p.src];
      }
      for (const auto& [src, n] : copies) {
        CHECK(n >= n_syn / n_bit);
        CHECK(n <= n_syn / n_bit + 1);
      }
    } else {
      CHECK_THROWS_AS(build_mixture(bit, syn, {MixStrategy::kUpsampled, 1, 1, 1}), DataError);
    }

    const std::size_t want = b * n_bit / a;
    if (want <= n_syn) {
      auto cut = build_mixture(bit, syn, {MixStrategy::kCutoff, a, b, 3}, scores);
      CHECK(count_origin(cut, "bitext") == n_bit);
      CHECK(count_origin(cut, "synthetic") == want);
      CHECK(cut.synthetic_lines == want);
    } else {
      CHECK_THROWS_AS(build_mixture(bit, syn, {MixStrategy::kCutoff, a, b, 3}, scores), DataError);
    }
  }
}

TEST_CASE("mixtures are seeded, shuffled and renumbered") {
  auto bit = make_pairs(50, "b");
  auto syn = make_pairs(80, "s");
  auto a = build_mixture(bit, syn, {MixStrategy::kOriginalRatio, 1, 1, 4});
  auto b = build_mixture(bit, syn, {MixStrategy::kOriginalRatio, 1, 1, 4});
  auto c = build_mixture(bit, syn, {MixStrategy::kOriginalRatio, 1, 1, 5});
  CHECK(a.pairs == b.pairs);
  CHECK(a.pairs != c.pairs);
  for (std::size_t i = 0; i < a.pairs.size(); ++i) CHECK(a.pairs[i].id == i);
}

TEST_CASE("mixture configuration errors") {
  auto bit = make_pairs(5, "b");
  auto syn = make_pairs(10, "s");
  CHECK_THROWS_AS(build_mixture(bit, syn, {MixStrategy::kCutoff, 1, 1, 1}), DataError);
  CHECK(parse_ratio("1:3") == std::pair<std::uint64_t, std::uint64_t>{1, 3});
  CHECK_THROWS_AS(parse_ratio("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_ratio("2"), ConfigError);
  CHECK_THROWS_AS(parse_ratio("1:x"), ConfigError);
  CHECK(mix_strategy_from_string("upsampled_1_1") == MixStrategy::kUpsampled);
  CHECK(to_string(MixStrategy::kCutoff) == "cutoff");
  CHECK_THROWS_AS(mix_strategy_from_string("random"), ConfigError);
}
