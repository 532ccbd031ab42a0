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

#include "corpusforge/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corpusforge/error.hpp"
#include "corpusforge/rng.hpp"

namespace corpusforge::select {

DccefScore dccef_score(double h_fwd, double h_bwd, std::optional<double> h_in,
                       std::optional<double> h_out) {
  if (!(h_fwd >= 0.0) || !(h_bwd >= 0.0)) {
    throw ConfigError("conditional cross-entropies must be non-negative");
  }
  DccefScore s;
  s.h_fwd = h_fwd;
  s.h_bwd = h_bwd;
  s.dual = std::exp(-(std::abs(h_fwd - h_bwd) + 0.5 * (h_fwd + h_bwd)));
  s.final_score = s.dual;
  if (h_in && h_out) {
    s.dom_weight = std::min(1.0, std::exp(*h_out - *h_in));
    s.final_score = s.dual * *s.dom_weight;
  }
  return s;
}

std::vector<std::size_t> dccef_select(std::span<const DccefScore> scores,
                                      const KeepPolicy& keep) {
  std::vector<std::size_t> kept;
  if (const auto* f = std::get_if<KeepFraction>(&keep)) {
    if (!(f->fraction > 0.0 && f->fraction <= 1.0)) {
      throw ConfigError("keep fraction must be in (0, 1]");
    }
    const double want = f->fraction * static_cast<double>(scores.size());
    // Guard against 0.3 * 10 landing a hair above 3.
    auto k = static_cast<std::size_t>(std::ceil(want - 1e-9));
    k = std::min(k, scores.size());
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return scores[a].final_score > scores[b].final_score;
    });
    kept.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(kept.begin(), kept.end());
  } else {
    const double tau = std::get<KeepThreshold>(keep).threshold;
    if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("threshold must be in [0, 1]");
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].final_score >= tau) kept.push_back(i);
    }
  }
  return kept;
}

std::vector<SentencePair> dccef_filter(std::span<const SentencePair> pairs,
                                       std::span<const DccefScore> scores,
                                       const KeepPolicy& keep) {
  if (pairs.size() != scores.size()) {
    throw DataError("DCCEF needs exactly one score per pair (" +
                    std::to_string(pairs.size()) + " pairs, " +
                    std::to_string(scores.size()) + " scores)");
  }
  std::vector<SentencePair> out;
  for (std::size_t i : dccef_select(scores, keep)) out.push_back(pairs[i]);
  return out;
}

MonoScore mono_score(std::span<const std::string> tokens,
                     const lm::NGramModel& lm_in, const lm::NGramModel& lm_out) {
  MonoScore s;
  s.h_in = lm::cross_entropy(tokens, lm_in);
  s.h_out = lm::cross_entropy(tokens, lm_out);
  s.combined = s.h_out - s.h_in;
  return s;
}

MonoSelection select_mono(std::span<const MonoScore> scores,
                          const MonoStrategy& strategy) {
  MonoSelection sel;
  if (const auto* t = std::get_if<CombinedThreshold>(&strategy)) {
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i].combined >= t->threshold) sel.indices.push_back(i);
    }
    return sel;
  }
  const std::size_t n = std::get<InDomainTop>(strategy).n;
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a].h_in < scores[b].h_in;
  });
  if (n > order.size()) sel.truncated_request = true;
  order.resize(std::min(n, order.size()));
  std::sort(order.begin(), order.end());
  sel.indices = std::move(order);
  return sel;
}

MixStrategy mix_strategy_from_string(const std::string& s) {
  if (s == "original_ratio" || s == "original-ratio") return MixStrategy::kOriginalRatio;
  if (s == "upsampled_1_1" || s == "upsampled" || s == "upsampled-1-1") {
    return MixStrategy::kUpsampled;
  }
  if (s == "cutoff") return MixStrategy::kCutoff;
  throw ConfigError("unknown mixture strategy: " + s);
}

std::string to_string(MixStrategy s) {
  switch (s) {
    case MixStrategy::kOriginalRatio: return "original_ratio";
    case MixStrategy::kUpsampled: return "upsampled_1_1";
    case MixStrategy::kCutoff: return "cutoff";
  }
  return "original_ratio";
}

std::pair<std::uint64_t, std::uint64_t> parse_ratio(const std::string& s) {
  const auto colon = s.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument(s);
    std::size_t used_a = 0, used_b = 0;
    const std::string a_str = s.substr(0, colon);
    const std::string b_str = s.substr(colon + 1);
    const long long a = std::stoll(a_str, &used_a);
    const long long b = std::stoll(b_str, &used_b);
    if (used_a != a_str.size() || used_b != b_str.size() || a <= 0 || b <= 0) {
      throw std::invalid_argument(s);
    }
    return {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b)};
  } catch (const std::exception&) {
    throw ConfigError("ratio must look like a:b with positive integers, got '" + s + "'");
  }
}

Mixture build_mixture(std::span<const SentencePair> bitext,
                      std::span<const SentencePair> synthetic,
                      const MixtureSpec& spec,
                      std::span<const double> synthetic_scores) {
  const std::uint64_t n_bit = bitext.size();
  const std::uint64_t n_syn = synthetic.size();
  if (spec.bitext_parts == 0 || spec.synthetic_parts == 0) {
    throw ConfigError("mixture ratio parts must be positive");
  }
  Mixture mix;
  auto add = [&](const SentencePair& p, const char* origin) {
    SentencePair q = p;
    q.origin = origin;
    mix.pairs.push_back(std::move(q));
  };
  Rng rng(spec.seed);
  switch (spec.strategy) {
    case MixStrategy::kOriginalRatio:
      for (const auto& p : bitext) add(p, "bitext");
      for (const auto& p : synthetic) add(p, "synthetic");
      mix.bitext_lines = n_bit;
      mix.synthetic_lines = n_syn;
      break;
    case MixStrategy::kUpsampled: {
      if (n_bit == 0) throw DataError("upsampling needs a nonempty bitext");
      if (n_syn < n_bit) {
        throw DataError("upsampling needs at least as much synthetic data as bitext");
      }
      const std::uint64_t copies = n_syn / n_bit;
      const std::uint64_t rest = n_syn % n_bit;
      for (std::uint64_t c = 0; c < copies; ++c) {
        for (const auto& p : bitext) add(p, "bitext");
      }
      auto sample = rng.sample(n_bit, rest);
      std::sort(sample.begin(), sample.end());
      for (std::size_t i : sample) add(bitext[i], "bitext");
      for (const auto& p : synthetic) add(p, "synthetic");
      mix.bitext_lines = n_syn;
      mix.synthetic_lines = n_syn;
      break;
    }
    case MixStrategy::kCutoff: {
      if (synthetic_scores.size() != synthetic.size()) {
        throw DataError("cutoff mixing needs one score per synthetic pair");
      }
      const std::uint64_t want = spec.synthetic_parts * n_bit / spec.bitext_parts;
      if (want > n_syn) {
        throw DataError("cutoff " + std::to_string(spec.bitext_parts) + ":" +
                        std::to_string(spec.synthetic_parts) + " needs " +
                        std::to_string(want) + " synthetic pairs, have " +
                        std::to_string(n_syn));
      }
      std::vector<std::size_t> order(synthetic.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return synthetic_scores[a] > synthetic_scores[b];
      });
      order.resize(want);
      std::sort(order.begin(), order.end());
      for (const auto& p : bitext) add(p, "bitext");
      for (std::size_t i : order) add(synthetic[i], "synthetic");
      mix.bitext_lines = n_bit;
      mix.synthetic_lines = want;
      break;
    }
  }
  rng.shuffle(mix.pairs);
  for (std::size_t i = 0; i < mix.pairs.size(); ++i) mix.pairs[i].id = i;
  return mix;
}

}  // namespace corpusforge::select
