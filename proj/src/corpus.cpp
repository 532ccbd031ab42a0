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

#include "corpusforge/corpus.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstdio>
#include <iterator>
#include <memory>
#include <sstream>

#include "corpusforge/error.hpp"
#include "corpusforge/rng.hpp"
#include "corpusforge/unicode.hpp"

namespace corpusforge {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string slurp(const fs::path& path) {
  auto in = open_in(path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return data;
}

bool has_forbidden(std::string_view s) {
  return s.find_first_of("\t\r\n") != std::string_view::npos;
}

struct EvpDeleter {
  void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(ErrorKind::kInternal, "sha256 init failed");
    }
  }
  void update(const char* data, std::size_t n) {
    EVP_DigestUpdate(ctx_.get(), data, n);
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md, &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
      out.push_back(kHex[md[i] >> 4]);
      out.push_back(kHex[md[i] & 15]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, EvpDeleter> ctx_;
};

std::uint64_t count_lines(std::string_view data) {
  std::uint64_t n = 0;
  for (char c : data) n += (c == '\n');
  if (!data.empty() && data.back() != '\n') ++n;
  return n;
}

}  // namespace

std::string to_string(FileRole role) {
  switch (role) {
    case FileRole::kBitext: return "bitext";
    case FileRole::kSynthetic: return "synthetic";
    case FileRole::kMono: return "mono";
    case FileRole::kModel: return "model";
    case FileRole::kScores: return "scores";
    case FileRole::kReport: return "report";
  }
  return "bitext";
}

FileRole file_role_from_string(std::string_view s) {
  if (s == "bitext") return FileRole::kBitext;
  if (s == "synthetic") return FileRole::kSynthetic;
  if (s == "mono") return FileRole::kMono;
  if (s == "model") return FileRole::kModel;
  if (s == "scores") return FileRole::kScores;
  if (s == "report") return FileRole::kReport;
  throw DataError("unknown manifest role: " + std::string(s));
}

json Manifest::to_json() const {
  json arr = json::array();
  for (const auto& e : entries) {
    arr.push_back({{"path", e.path},
                   {"role", to_string(e.role)},
                   {"line_count", e.line_count},
                   {"sha256", e.sha256},
                   {"created_by", e.created_by}});
  }
  return json{{"entries", arr}};
}

Manifest Manifest::from_json(const json& j) {
  Manifest m;
  try {
    for (const auto& e : j.at("entries")) {
      ManifestEntry entry;
      entry.path = e.at("path").get<std::string>();
      entry.role = file_role_from_string(e.at("role").get<std::string>());
      entry.line_count = e.at("line_count").get<std::uint64_t>();
      entry.sha256 = e.at("sha256").get<std::string>();
      entry.created_by = e.value("created_by", "");
      m.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& ex) {
    throw DataError(std::string("malformed manifest: ") + ex.what());
  }
  return m;
}

void Manifest::save(const fs::path& path) const {
  auto out = open_out(path);
  out << to_json().dump(2) << '\n';
  finish(out, path);
}

Manifest Manifest::load(const fs::path& path) {
  const std::string text = slurp(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw DataError("manifest is not JSON: " + path.string());
  return from_json(j);
}

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes.data(), bytes.size());
  return h.hex();
}

std::string sha256_file(const fs::path& path) {
  auto in = open_in(path);
  Sha256 h;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

ManifestEntry describe_file(const fs::path& path, FileRole role,
                            const std::string& created_by,
                            const fs::path& base_dir) {
  const std::string data = slurp(path);
  ManifestEntry e;
  e.path = base_dir.empty() ? path.generic_string()
                            : fs::relative(path, base_dir).generic_string();
  e.role = role;
  e.line_count = count_lines(data);
  e.sha256 = sha256_hex(data);
  e.created_by = created_by;
  return e;
}

void verify_manifest(const Manifest& m, const fs::path& base_dir) {
  for (const auto& e : m.entries) {
    fs::path p(e.path);
    if (p.is_relative()) p = base_dir / p;
    if (!fs::exists(p)) throw IoError("manifest file missing: " + p.string());
    const std::string data = slurp(p);
    if (sha256_hex(data) != e.sha256) {
      throw DataError("integrity error: sha256 mismatch for " + e.path);
    }
    if (count_lines(data) != e.line_count) {
      throw DataError("integrity error: line count mismatch for " + e.path);
    }
  }
}

std::optional<std::string> parse_parallel_line(std::string_view line,
                                               SentencePair& out) {
  if (!utf8::valid(line)) return "malformed UTF-8";
  const std::size_t tab = line.find('\t');
  if (tab == std::string_view::npos) return "missing tab separator";
  if (line.find('\t', tab + 1) != std::string_view::npos) {
    return "more than one tab separator";
  }
  if (line.find('\r') != std::string_view::npos) return "carriage return in record";
  out.src.assign(line.substr(0, tab));
  out.tgt.assign(line.substr(tab + 1));
  return std::nullopt;
}

ParallelReader::ParallelReader(const fs::path& path, OnError on_error,
                               std::string origin)
    : in_(open_in(path)), on_error_(on_error), origin_(std::move(origin)) {}

bool ParallelReader::next(SentencePair& out) {
  while (std::getline(in_, line_)) {
    ++line_no_;
    if (auto err = parse_parallel_line(line_, out)) {
      if (on_error_ == OnError::kAbort) throw DataError(*err, line_no_);
      errors_.push_back({line_no_, *err});
      continue;
    }
    out.id = next_id_++;
    out.origin = origin_;
    return true;
  }
  if (in_.bad()) throw IoError("read failed");
  return false;
}

ReadResult read_parallel(const fs::path& path, OnError on_error,
                         const std::string& origin) {
  ParallelReader reader(path, on_error, origin);
  ReadResult result;
  SentencePair p;
  while (reader.next(p)) result.pairs.push_back(p);
  result.errors = reader.errors();
  return result;
}

void check_record(const SentencePair& p) {
  if (has_forbidden(p.src) || has_forbidden(p.tgt)) {
    throw DataError("record " + std::to_string(p.id) +
                    " contains a tab or line break");
  }
}

ManifestEntry write_parallel(std::span<const SentencePair> pairs,
                             const fs::path& path, FileRole role,
                             const std::string& created_by) {
  for (const auto& p : pairs) check_record(p);
  std::string data;
  for (const auto& p : pairs) {
    data.append(p.src);
    data.push_back('\t');
    data.append(p.tgt);
    data.push_back('\n');
  }
  auto out = open_out(path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  finish(out, path);
  ManifestEntry e;
  e.path = path.generic_string();
  e.role = role;
  e.line_count = pairs.size();
  e.sha256 = sha256_hex(data);
  e.created_by = created_by;
  return e;
}

std::vector<MonoSentence> read_mono(const fs::path& path,
                                    const std::string& origin) {
  auto lines = read_lines(path);
  std::vector<MonoSentence> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!utf8::valid(lines[i])) throw DataError("malformed UTF-8", i + 1);
    if (lines[i].find_first_of("\t\r") != std::string::npos) {
      throw DataError("tab or carriage return in monolingual line", i + 1);
    }
    out.push_back({i, std::move(lines[i]), origin});
  }
  return out;
}

ManifestEntry write_mono(std::span<const MonoSentence> sentences,
                         const fs::path& path, FileRole role,
                         const std::string& created_by) {
  std::string data;
  for (const auto& s : sentences) {
    if (has_forbidden(s.text)) {
      throw DataError("record " + std::to_string(s.id) +
                      " contains a tab or line break");
    }
    data.append(s.text);
    data.push_back('\n');
  }
  auto out = open_out(path);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  finish(out, path);
  ManifestEntry e;
  e.path = path.generic_string();
  e.role = role;
  e.line_count = sentences.size();
  e.sha256 = sha256_hex(data);
  e.created_by = created_by;
  return e;
}

std::vector<std::string> read_lines(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  if (in.bad()) throw IoError("read failed: " + path.string());
  return lines;
}

void write_lines(std::span<const std::string> lines, const fs::path& path) {
  auto out = open_out(path);
  for (const auto& l : lines) {
    out.write(l.data(), static_cast<std::streamsize>(l.size()));
    out.put('\n');
  }
  finish(out, path);
}

void shuffle_file(const fs::path& in, const fs::path& out,
                  std::uint64_t seed) {
  const std::string data = slurp(in);
  struct Span {
    std::size_t begin;
    std::size_t size;
  };
  std::vector<Span> index;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t end = data.find('\n', start);
    if (end == std::string::npos) end = data.size();
    index.push_back({start, end - start});
    start = end + 1;
  }
  Rng rng(seed);
  rng.shuffle(index);
  auto os = open_out(out);
  for (const auto& s : index) {
    os.write(data.data() + s.begin, static_cast<std::streamsize>(s.size));
    os.put('\n');
  }
  finish(os, out);
}

std::vector<fs::path> shard_file(const fs::path& in, const std::string& prefix,
                                 std::size_t k) {
  if (k == 0) throw ConfigError("shard count must be at least 1");
  std::vector<fs::path> paths;
  std::vector<std::ofstream> outs;
  for (std::size_t j = 0; j < k; ++j) {
    paths.emplace_back(prefix + "." + std::to_string(j));
    outs.push_back(open_out(paths.back()));
  }
  auto is = open_in(in);
  std::string line;
  std::size_t i = 0;
  while (std::getline(is, line)) {
    auto& os = outs[i++ % k];
    os.write(line.data(), static_cast<std::streamsize>(line.size()));
    os.put('\n');
  }
  for (std::size_t j = 0; j < k; ++j) finish(outs[j], paths[j]);
  return paths;
}

void merge_files(std::span<const fs::path> shards, const fs::path& out,
                 bool interleave) {
  auto os = open_out(out);
  if (!interleave) {
    for (const auto& p : shards) {
      for (const auto& line : read_lines(p)) {
        os.write(line.data(), static_cast<std::streamsize>(line.size()));
        os.put('\n');
      }
    }
  } else {
    std::vector<std::ifstream> ins;
    for (const auto& p : shards) ins.push_back(open_in(p));
    std::string line;
    bool any = true;
    while (any) {
      any = false;
      for (auto& is : ins) {
        if (std::getline(is, line)) {
          any = true;
          os.write(line.data(), static_cast<std::streamsize>(line.size()));
          os.put('\n');
        }
      }
    }
  }
  finish(os, out);
}

std::vector<double> read_scores(const fs::path& path) {
  const auto lines = read_lines(path);
  std::vector<double> values(lines.size(), 0.0);
  std::vector<bool> seen(lines.size(), false);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    const std::size_t tab = l.find('\t');
    if (tab == std::string::npos) throw DataError("expected id<TAB>value", i + 1);
    std::uint64_t id = 0;
    auto r1 = std::from_chars(l.data(), l.data() + tab, id);
    if (r1.ec != std::errc() || r1.ptr != l.data() + tab) {
      throw DataError("bad id in score file", i + 1);
    }
    double v = 0.0;
    auto r2 = std::from_chars(l.data() + tab + 1, l.data() + l.size(), v);
    if (r2.ec != std::errc() || r2.ptr != l.data() + l.size()) {
      throw DataError("bad value in score file", i + 1);
    }
    if (id >= lines.size()) throw DataError("score id out of range", i + 1);
    if (seen[id]) throw DataError("duplicate score id", i + 1);
    seen[id] = true;
    values[id] = v;
  }
  return values;
}

void write_scores(std::span<const double> values, const fs::path& path) {
  auto out = open_out(path);
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << i << '\t';
    auto r = std::to_chars(buf, buf + sizeof buf, values[i]);
    out.write(buf, r.ptr - buf);
    out.put('\n');
  }
  finish(out, path);
}

}  // namespace corpusforge
