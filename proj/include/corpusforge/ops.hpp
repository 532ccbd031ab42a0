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

// File-to-file operations behind the CLI subcommands and pipeline stages.
// Text files are either monolingual (one sentence per line) or parallel
// (`src<TAB>tgt`); line transforms apply to every TAB-separated field.

#ifndef CORPUSFORGE_OPS_HPP_
#define CORPUSFORGE_OPS_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corpusforge/augment.hpp"
#include "corpusforge/bpe.hpp"
#include "corpusforge/corpus.hpp"
#include "corpusforge/filters.hpp"
#include "corpusforge/optim.hpp"
#include "corpusforge/rerank.hpp"
#include "corpusforge/select.hpp"
#include "json.hpp"

namespace corpusforge::ops {

namespace fs = std::filesystem;

enum class Side { kSrc, kTgt };
Side side_from_string(const std::string& s);

struct NormalizeOptions {
  bool tokenize = true;
  bool protect_placeholders = true;  // keep URLs, emails and tags whole
  unsigned threads = 1;
};

std::string normalize_line(const std::string& line, const NormalizeOptions& options);
std::uint64_t normalize_file(const fs::path& in, const fs::path& out,
                             const NormalizeOptions& options);

// Writes the masked text and a JSON-lines sidecar, one array per field
// group: a JSON array of slot arrays, one per TAB field.
std::uint64_t mask_file(const fs::path& in, const fs::path& out, const fs::path& map_out);
std::uint64_t unmask_file(const fs::path& in, const fs::path& map_in, const fs::path& out);

std::uint64_t tokenize_file(const fs::path& in, const fs::path& out, unsigned threads = 1);
std::uint64_t detokenize_file(const fs::path& in, const fs::path& out);

// Trains on one field of every line (`side` ignored for single-field lines).
void truecase_train_file(const fs::path& in, const fs::path& model_out,
                         Side side = Side::kTgt);
std::uint64_t truecase_apply_file(const fs::path& model, const fs::path& in,
                                  const fs::path& out);

struct FilterFileOptions {
  filters::FilterConfig config;
  std::map<std::string, fs::path> langid_seeds;  // language -> seed text
  std::optional<fs::path> lexicon;
  std::optional<fs::path> rejected_out;  // `rule<TAB>src<TAB>tgt`
  std::optional<fs::path> report_out;
  unsigned threads = 1;
};

filters::FilterReport filter_file(const fs::path& in, const fs::path& out,
                                  const FilterFileOptions& options);
std::uint64_t dedupe_file(const fs::path& in, const fs::path& out,
                          std::uint64_t* removed = nullptr);

// Sentences of a monolingual file, or one side of a parallel file.
std::vector<std::vector<std::string>> read_sentences(const fs::path& in,
                                                     std::optional<Side> side);

void lm_train_file(const fs::path& in, const fs::path& arpa_out, int order,
                   std::optional<Side> side = std::nullopt, int min_count = 1);

// Writes `id<TAB>cross-entropy` and returns the corpus perplexity.
double lm_score_file(const fs::path& arpa, const fs::path& in, const fs::path& scores_out,
                     std::optional<Side> side = std::nullopt, unsigned threads = 1);

struct DccefFileOptions {
  fs::path corpus;
  fs::path fwd_scores;
  fs::path bwd_scores;
  std::optional<fs::path> in_lm;   // domain weighting needs both LMs
  std::optional<fs::path> out_lm;
  Side domain_side = Side::kTgt;
  select::KeepPolicy keep = select::KeepFraction{1.0};
  std::optional<fs::path> scores_out;  // `id<TAB>final`
  unsigned threads = 1;
};

std::uint64_t dccef_file(const DccefFileOptions& options, const fs::path& out);

struct SelectMonoOptions {
  select::MonoStrategy strategy = select::CombinedThreshold{0.0};
  std::optional<Side> side;
  std::optional<fs::path> scores_out;  // `id<TAB>h_in<TAB>h_out<TAB>combined`
  unsigned threads = 1;
};

struct SelectMonoOutcome {
  std::uint64_t input = 0;
  std::uint64_t kept = 0;
  bool truncated_request = false;
};

SelectMonoOutcome select_mono_file(const fs::path& in, const fs::path& lm_in,
                                   const fs::path& lm_out, const fs::path& out,
                                   const SelectMonoOptions& options);

// Moore-Lewis combined scores of one side of a corpus.
std::vector<double> combined_scores(const fs::path& in, const fs::path& lm_in,
                                    const fs::path& lm_out, std::optional<Side> side,
                                    unsigned threads = 1);

select::Mixture mix_file(const fs::path& bitext, const fs::path& synthetic,
                         const select::MixtureSpec& spec,
                         const std::optional<fs::path>& synthetic_scores, const fs::path& out);

struct AugmentFileOutcome {
  std::uint64_t input = 0;
  std::uint64_t synthetic = 0;
  std::uint64_t skipped = 0;
};

// With `combined`, the output holds the input followed by the synthetic
// pairs; otherwise only the synthetic pairs.
AugmentFileOutcome augment_file(const fs::path& in, const fs::path& out,
                                const augment::AugmentConfig& config, bool combined,
                                unsigned threads = 1);

// Learns merges from every field of every line.
bpe::MergeTable bpe_train_file(const fs::path& in, const fs::path& codes_out,
                               std::size_t num_merges,
                               const std::optional<fs::path>& boundaries,
                               int min_frequency = 2);
std::uint64_t bpe_apply_file(const fs::path& codes, const fs::path& in, const fs::path& out,
                             const std::optional<fs::path>& boundaries, unsigned threads = 1);
std::uint64_t bpe_undo_file(const fs::path& in, const fs::path& out);

// Writes the best hypothesis per id, one line each in ascending id order;
// optionally the full re-sorted lists in Moses format with an `r2l=` feature
// and the combined score as total.
std::uint64_t rerank_file(const fs::path& nbest, const std::optional<fs::path>& r2l,
                          const rerank::RerankConfig& config, const fs::path& out,
                          const std::optional<fs::path>& sorted_out);

struct BenchOptions {
  std::string problem = "rosenbrock";
  optim::OptimizerConfig config;
  optim::TrialOptions trial;
};

nlohmann::json optim_bench(const BenchOptions& options);

// Line counts, retention relative to the first entry, and any per-rule
// rejection counts from a report.json next to the manifest. Verifies every
// file against its recorded hash and count.
nlohmann::json stats(const fs::path& manifest);
std::string format_stats(const nlohmann::json& report);

}  // namespace corpusforge::ops

#endif  // CORPUSFORGE_OPS_HPP_
