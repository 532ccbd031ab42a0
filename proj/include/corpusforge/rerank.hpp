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

// N-best list re-ranking with right-to-left model scores.

#ifndef CORPUSFORGE_RERANK_HPP_
#define CORPUSFORGE_RERANK_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace corpusforge::rerank {

struct NBestEntry {
  std::int64_t sent_id = 0;
  std::string tokens;
  std::vector<std::pair<std::string, std::vector<double>>> features;
  double total = 0.0;  // left-to-right log-probability
  double r2l = 0.0;
  bool has_r2l = false;
  double combined = 0.0;
};

// Groups keyed by sentence id; entries keep their n-best order.
using NBestGroups = std::map<std::int64_t, std::vector<NBestEntry>>;

struct RerankConfig {
  int n = 12;
  double w_l2r = 1.0;
  double w_r2l = 1.0;

  void validate() const;
};

// Moses format: `id ||| tokens ||| name= v ... ||| total`. Spacing around
// separators is free on input. Groups are truncated to `max_per_id`
// entries when it is positive.
NBestGroups parse_nbest(std::istream& in, int max_per_id = 0);
NBestGroups parse_nbest_file(const std::string& path, int max_per_id = 0);

// Canonical single-space Moses line.
std::string format_entry(const NBestEntry& e);

// Key is (sent_id, exact token string).
using R2LScores = std::map<std::pair<std::int64_t, std::string>, double>;

// `id<TAB>logprob<TAB>tokens`. A repeated key with a different value is an
// ambiguous join and rejected.
R2LScores parse_r2l(std::istream& in);
R2LScores parse_r2l_file(const std::string& path);

// Attaches right-to-left scores; any entry without one is an error that
// lists every missing (id, tokens).
void join_r2l(NBestGroups& groups, const R2LScores& scores);

struct RerankResult {
  std::vector<NBestEntry> best;  // one per id, ascending
  NBestGroups sorted;            // each group by descending combined score
};

// combined = w_l2r * total + w_r2l * r2l; ties go to the earlier entry.
RerankResult rerank(const NBestGroups& groups, const RerankConfig& config);

// Index of the best entry in a non-empty group.
std::size_t best_index(const std::vector<NBestEntry>& group, const RerankConfig& config);

}  // namespace corpusforge::rerank

#endif  // CORPUSFORGE_RERANK_HPP_
