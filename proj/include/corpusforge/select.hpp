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

// Score combination and data selection: dual conditional cross-entropy
// scoring of sentence pairs, cross-entropy-difference scoring of
// monolingual text, and bitext/synthetic mixture construction.

#ifndef CORPUSFORGE_SELECT_HPP_
#define CORPUSFORGE_SELECT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "corpusforge/corpus.hpp"
#include "corpusforge/lm.hpp"

namespace corpusforge::select {

struct DccefScore {
  double h_fwd = 0.0;
  double h_bwd = 0.0;
  double dual = 0.0;
  std::optional<double> dom_weight;
  double final_score = 0.0;
};

// dual = exp(-(|h_fwd - h_bwd| + (h_fwd + h_bwd) / 2)). When both
// in-domain and out-of-domain entropies are given, the result is further
// weighted by min(1, exp(h_out - h_in)).
DccefScore dccef_score(double h_fwd, double h_bwd,
                       std::optional<double> h_in = std::nullopt,
                       std::optional<double> h_out = std::nullopt);

struct KeepFraction {
  double fraction = 1.0;
};
struct KeepThreshold {
  double threshold = 0.0;
};
using KeepPolicy = std::variant<KeepFraction, KeepThreshold>;

// Indices of the kept items, ascending. Fraction mode keeps the top
// ceil(f * N) final scores with ties going to the lower index.
std::vector<std::size_t> dccef_select(std::span<const DccefScore> scores,
                                      const KeepPolicy& keep);

std::vector<SentencePair> dccef_filter(std::span<const SentencePair> pairs,
                                       std::span<const DccefScore> scores,
                                       const KeepPolicy& keep);

struct MonoScore {
  double h_in = 0.0;
  double h_out = 0.0;
  double combined = 0.0;  // h_out - h_in; positive means closer to in-domain
};

MonoScore mono_score(std::span<const std::string> tokens,
                     const lm::NGramModel& lm_in, const lm::NGramModel& lm_out);

struct CombinedThreshold {
  double threshold = 0.0;
};
struct InDomainTop {
  std::size_t n = 0;
};
using MonoStrategy = std::variant<CombinedThreshold, InDomainTop>;

struct MonoSelection {
  std::vector<std::size_t> indices;  // ascending, i.e. corpus order
  bool truncated_request = false;    // InDomainTop asked for more than exist
};

MonoSelection select_mono(std::span<const MonoScore> scores,
                          const MonoStrategy& strategy);

enum class MixStrategy { kOriginalRatio, kUpsampled, kCutoff };

MixStrategy mix_strategy_from_string(const std::string& s);
std::string to_string(MixStrategy s);

struct MixtureSpec {
  MixStrategy strategy = MixStrategy::kOriginalRatio;
  std::uint64_t bitext_parts = 1;
  std::uint64_t synthetic_parts = 1;
  std::uint64_t seed = 1;
};

// Parses "a:b" with positive integers.
std::pair<std::uint64_t, std::uint64_t> parse_ratio(const std::string& s);

struct Mixture {
  std::vector<SentencePair> pairs;  // shuffled; origin is "bitext" or "synthetic"
  std::uint64_t bitext_lines = 0;
  std::uint64_t synthetic_lines = 0;
};

// original_ratio: all bitext + all synthetic.
// upsampled: bitext repeated floor(N_syn / N_bit) times plus a seeded
//   sample without replacement of the remainder, so both halves are N_syn.
// cutoff a:b: all bitext + the floor(b * N_bit / a) best synthetic pairs
//   by `synthetic_scores` (higher is better, ties to the lower index).
Mixture build_mixture(std::span<const SentencePair> bitext,
                      std::span<const SentencePair> synthetic,
                      const MixtureSpec& spec,
                      std::span<const double> synthetic_scores = {});

}  // namespace corpusforge::select

#endif  // CORPUSFORGE_SELECT_HPP_
