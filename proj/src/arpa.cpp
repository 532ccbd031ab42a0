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

// ARPA back-off model text format.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "corpusforge/error.hpp"
#include "corpusforge/lm.hpp"

namespace corpusforge::lm {
namespace {

constexpr double kLn10 = 2.302585092994045684;

void put_double(std::ostream& out, double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, r.ptr - buf);
}

bool parse_double(std::string_view s, double& v) {
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

}  // namespace

void NGramModel::write_arpa(std::ostream& out) const {
  out << "\n\\data\\\n";
  for (int n = 1; n <= order_; ++n) {
    out << "ngram " << n << '=' << tables_[n - 1].size() << '\n';
  }
  for (int n = 1; n <= order_; ++n) {
    out << "\n\\" << n << "-grams:\n";
    std::vector<const std::pair<const NGramKey, Entry>*> rows;
    rows.reserve(tables_[n - 1].size());
    for (const auto& kv : tables_[n - 1]) rows.push_back(&kv);
    const auto len = static_cast<std::size_t>(n);
    std::sort(rows.begin(), rows.end(), [&](const auto* a, const auto* b) {
      for (std::size_t i = 0; i < len; ++i) {
        const auto& wa = words_[a->first.words[i]];
        const auto& wb = words_[b->first.words[i]];
        if (wa != wb) return wa < wb;
      }
      return false;
    });
    for (const auto* row : rows) {
      const Entry& e = row->second;
      if (n == 1 && row->first.words[0] == bos_) {
        out << "-99";
      } else {
        put_double(out, e.log_prob / kLn10);
      }
      out << '\t';
      for (std::size_t i = 0; i < len; ++i) {
        if (i) out << ' ';
        out << words_[row->first.words[i]];
      }
      if (e.has_backoff) {
        out << '\t';
        put_double(out, e.log_backoff / kLn10);
      }
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

NGramModel NGramModel::read_arpa(std::istream& in) {
  NGramModel m;
  std::string raw;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view& line) {
    if (!std::getline(in, raw)) return false;
    ++line_no;
    line = trim(raw);
    return true;
  };

  std::string_view line;
  bool found = false;
  while (next_line(line)) {
    if (line == "\\data\\") {
      found = true;
      break;
    }
  }
  if (!found) throw DataError("missing \\data\\ header", line_no + 1);

  std::vector<std::size_t> counts;
  while (next_line(line)) {
    if (line.empty()) {
      if (counts.empty()) continue;
      break;
    }
    if (line.substr(0, 6) != "ngram ") throw DataError("expected 'ngram N=count'", line_no);
    const std::size_t eq = line.find('=');
    int n = 0;
    std::size_t c = 0;
    if (eq == std::string_view::npos ||
        std::from_chars(line.data() + 6, line.data() + eq, n).ec != std::errc() ||
        std::from_chars(line.data() + eq + 1, line.data() + line.size(), c).ec !=
            std::errc()) {
      throw DataError("malformed ngram count line", line_no);
    }
    if (n != static_cast<int>(counts.size()) + 1 || n > kMaxOrder) {
      throw DataError("ngram orders must be consecutive from 1 to at most 5", line_no);
    }
    counts.push_back(c);
  }
  if (counts.empty()) throw DataError("no ngram counts in \\data\\ section", line_no);
  m.order_ = static_cast<int>(counts.size());
  m.tables_.assign(counts.size(), {});

  for (int n = 1; n <= m.order_; ++n) {
    const std::string header = "\\" + std::to_string(n) + "-grams:";
    while (next_line(line) && line.empty()) {
    }
    if (line != header) throw DataError("expected " + header, line_no);
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t r = 0; r < counts[n - 1]; ++r) {
      if (!next_line(line) || line.empty() || line.front() == '\\') {
        throw DataError("fewer " + std::to_string(n) + "-grams than declared", line_no);
      }
      const auto fields = split_ws(line);
      if (fields.size() != len + 1 && fields.size() != len + 2) {
        throw DataError("wrong number of fields in " + std::to_string(n) + "-gram", line_no);
      }
      Entry e;
      double lp = 0.0;
      if (!parse_double(fields[0], lp)) throw DataError("bad log-probability", line_no);
      e.log_prob = lp * kLn10;
      if (fields.size() == len + 2) {
        double bo = 0.0;
        if (!parse_double(fields[len + 1], bo)) throw DataError("bad back-off weight", line_no);
        e.log_backoff = bo * kLn10;
        e.has_backoff = true;
      }
      NGramKey key;
      for (std::size_t i = 0; i < len; ++i) {
        if (n == 1) {
          if (m.index_.count(std::string(fields[1]))) {
            throw DataError("duplicate unigram", line_no);
          }
          key.words[0] = m.add_word(fields[1]);
        } else {
          auto it = m.index_.find(std::string(fields[i + 1]));
          if (it == m.index_.end()) throw DataError("word missing from unigrams", line_no);
          key.words[i] = it->second;
        }
      }
      if (!m.tables_[n - 1].emplace(key, e).second) {
        throw DataError("duplicate " + std::to_string(n) + "-gram", line_no);
      }
    }
    // Anything but a blank line or the next header means the count is short.
    const auto pos = in.tellg();
    std::string peek;
    if (std::getline(in, peek)) {
      std::string_view p = trim(peek);
      if (!p.empty() && p.front() != '\\') {
        throw DataError("more " + std::to_string(n) + "-grams than declared", line_no + 1);
      }
      in.seekg(pos);
    } else {
      in.clear();
      in.seekg(pos);
    }
  }
  found = false;
  while (next_line(line)) {
    if (line.empty()) continue;
    if (line == "\\end\\") {
      found = true;
      break;
    }
    throw DataError("expected \\end\\", line_no);
  }
  if (!found) throw DataError("missing \\end\\", line_no + 1);

  auto special = [&](std::string_view w) {
    auto it = m.index_.find(std::string(w));
    return it == m.index_.end() ? kNoWord : it->second;
  };
  m.bos_ = special(kBos);
  m.eos_ = special(kEos);
  m.unk_ = special(kUnk);
  if (m.bos_ == kNoWord || m.eos_ == kNoWord) {
    throw DataError("ARPA model lacks <s> or </s>");
  }
  return m;
}

void NGramModel::save_arpa(const std::filesystem::path& path) const {
  std::ostringstream buf;
  write_arpa(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  const std::string s = buf.str();
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

NGramModel NGramModel::load_arpa(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return read_arpa(in);
}

}  // namespace corpusforge::lm
