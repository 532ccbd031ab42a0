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

// Record types and deterministic corpus file I/O.
//
// Parallel corpora are UTF-8 text, one `src<TAB>tgt<LF>` pair per line, no
// BOM. Monolingual corpora hold one sentence per line. Record ids are the
// 0-based line numbers of the file they were read from.

#ifndef CORPUSFORGE_CORPUS_HPP_
#define CORPUSFORGE_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace corpusforge {

struct SentencePair {
  std::uint64_t id = 0;
  std::string src;
  std::string tgt;
  std::string origin;

  bool operator==(const SentencePair&) const = default;
};

struct MonoSentence {
  std::uint64_t id = 0;
  std::string text;
  std::string origin;
};

enum class FileRole { kBitext, kSynthetic, kMono, kModel, kScores, kReport };

std::string to_string(FileRole role);
FileRole file_role_from_string(std::string_view s);

struct ManifestEntry {
  std::string path;  // relative to the manifest's directory when written
  FileRole role = FileRole::kBitext;
  std::uint64_t line_count = 0;
  std::string sha256;
  std::string created_by;  // "<stage> <config hash>"
};

struct Manifest {
  std::vector<ManifestEntry> entries;

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);

  void save(const std::filesystem::path& path) const;
  static Manifest load(const std::filesystem::path& path);
};

// Hashes and line-counts `path`, producing an entry whose path is stored
// relative to `base_dir` when given.
ManifestEntry describe_file(const std::filesystem::path& path, FileRole role,
                            const std::string& created_by,
                            const std::filesystem::path& base_dir = {});

// Throws DataError when a referenced file's count or hash does not match,
// IoError when it is missing. Relative paths resolve against `base_dir`.
void verify_manifest(const Manifest& m, const std::filesystem::path& base_dir);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

enum class OnError { kSkip, kAbort };

struct RecordError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

// Streams `src<TAB>tgt` records. In skip mode malformed lines are counted
// and reported through errors(); in abort mode they throw DataError.
class ParallelReader {
 public:
  ParallelReader(const std::filesystem::path& path, OnError on_error,
                 std::string origin = {});

  bool next(SentencePair& out);

  std::size_t skipped() const { return errors_.size(); }
  const std::vector<RecordError>& errors() const { return errors_; }

 private:
  std::ifstream in_;
  OnError on_error_;
  std::string origin_;
  std::string line_;
  std::size_t line_no_ = 0;
  std::uint64_t next_id_ = 0;
  std::vector<RecordError> errors_;
};

struct ReadResult {
  std::vector<SentencePair> pairs;
  std::vector<RecordError> errors;
};

ReadResult read_parallel(const std::filesystem::path& path,
                         OnError on_error = OnError::kAbort,
                         const std::string& origin = {});

// Parses one line (without its LF); returns an error message on failure.
std::optional<std::string> parse_parallel_line(std::string_view line,
                                               SentencePair& out);

// Throws DataError naming the record id if a field holds TAB, CR or LF.
void check_record(const SentencePair& p);

ManifestEntry write_parallel(std::span<const SentencePair> pairs,
                             const std::filesystem::path& path,
                             FileRole role = FileRole::kBitext,
                             const std::string& created_by = {});

std::vector<MonoSentence> read_mono(const std::filesystem::path& path,
                                    const std::string& origin = {});
ManifestEntry write_mono(std::span<const MonoSentence> sentences,
                         const std::filesystem::path& path,
                         FileRole role = FileRole::kMono,
                         const std::string& created_by = {});

// Raw line access shared by the line-level operations below. Lines exclude
// their LF; a missing final LF is tolerated on read.
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_lines(std::span<const std::string> lines,
                 const std::filesystem::path& path);

// Seeded Fisher-Yates over an in-memory index of line offsets. Memory is
// one 16-byte offset entry per line plus the file contents.
void shuffle_file(const std::filesystem::path& in,
                  const std::filesystem::path& out, std::uint64_t seed);

// Round-robin split: line i goes to shard i mod k. Output paths are
// `<prefix>.<j>` for j in [0, k).
std::vector<std::filesystem::path> shard_file(
    const std::filesystem::path& in, const std::string& prefix,
    std::size_t k);

// With interleave, inverts shard_file exactly; otherwise concatenates.
void merge_files(std::span<const std::filesystem::path> shards,
                 const std::filesystem::path& out, bool interleave);

// Id-keyed scalar score files: `id<TAB>value` per line. Ids must cover
// 0..N-1 exactly once; the result is indexed by id.
std::vector<double> read_scores(const std::filesystem::path& path);
void write_scores(std::span<const double> values,
                  const std::filesystem::path& path);

}  // namespace corpusforge

#endif  // CORPUSFORGE_CORPUS_HPP_
