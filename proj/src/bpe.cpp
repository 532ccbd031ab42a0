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

#include "corpusforge/bpe.hpp"

#include <fstream>
#include <sstream>

#include "corpusforge/error.hpp"
#include "corpusforge/textnorm.hpp"
#include "corpusforge/unicode.hpp"

namespace corpusforge::bpe {

namespace {

std::string pair_key(const std::string& a, const std::string& b) {
  std::string k;
  k.reserve(a.size() + b.size() + 1);
  k += a;
  k += ' ';
  k += b;
  return k;
}

// Code points of `word`, the last one carrying the end-of-word marker,
// plus the code point offset where each symbol starts.
void initial_symbols(const std::string& word, std::vector<std::string>& syms,
                     std::vector<std::size_t>& starts) {
  syms.clear();
  starts.clear();
  std::size_t pos = 0;
  std::size_t index = 0;
  while (pos < word.size()) {
    const std::size_t begin = pos;
    utf8::decode(word, pos);
    syms.emplace_back(word.substr(begin, pos - begin));
    starts.push_back(index++);
  }
  if (!syms.empty()) syms.back() += kEndOfWord;
}

bool blocked(const std::set<std::size_t>* bounds, std::size_t start) {
  return bounds != nullptr && bounds->count(start) != 0;
}

// Merges every non-overlapping occurrence of (a, b), left to right.
bool merge_in_place(std::vector<std::string>& syms, std::vector<std::size_t>& starts,
                    const std::string& a, const std::string& b,
                    const std::set<std::size_t>* bounds) {
  bool changed = false;
  std::size_t out = 0;
  for (std::size_t i = 0; i < syms.size(); ++i) {
    if (i + 1 < syms.size() && syms[i] == a && syms[i + 1] == b &&
        !blocked(bounds, starts[i + 1])) {
      syms[out] = a + b;
      starts[out] = starts[i];
      ++out;
      ++i;
      changed = true;
    } else {
      if (out != i) {
        syms[out] = std::move(syms[i]);
        starts[out] = starts[i];
      }
      ++out;
    }
  }
  syms.resize(out);
  starts.resize(out);
  return changed;
}

}  // namespace

void BoundarySet::add(const std::string& word, std::set<std::size_t> positions) {
  const std::size_t len = utf8::length(word);
  for (std::size_t p : positions) {
    if (p == 0 || p >= len) {
      throw DataError("boundary " + std::to_string(p) + " is not strictly inside '" +
                      word + "'");
    }
  }
  map_[word].insert(positions.begin(), positions.end());
}

const std::set<std::size_t>* BoundarySet::find(const std::string& word) const {
  auto it = map_.find(word);
  return it == map_.end() ? nullptr : &it->second;
}

BoundarySet BoundarySet::read(std::istream& in) {
  BoundarySet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError("expected word<TAB>positions", line_no);
    }
    std::set<std::size_t> positions;
    std::stringstream ss(line.substr(tab + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        std::size_t used = 0;
        const long long v = std::stoll(item, &used);
        if (used != item.size() || v < 0) throw std::invalid_argument(item);
        positions.insert(static_cast<std::size_t>(v));
      } catch (const std::exception&) {
        throw DataError("bad boundary position '" + item + "'", line_no);
      }
    }
    try {
      set.add(line.substr(0, tab), std::move(positions));
    } catch (const DataError& e) {
      throw DataError(e.what(), line_no);
    }
  }
  return set;
}

BoundarySet BoundarySet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open boundary file " + path);
  return read(in);
}

void BoundarySet::write(std::ostream& out) const {
  for (const auto& [word, positions] : map_) {
    out << word << '\t';
    bool first = true;
    for (std::size_t p : positions) {
      if (!first) out << ',';
      out << p;
      first = false;
    }
    out << '\n';
  }
}

void MergeTable::push_back(Pair p) {
  ranks_.emplace(pair_key(p.first, p.second), static_cast<long>(merges_.size()));
  merges_.push_back(std::move(p));
}

long MergeTable::rank(const std::string& left, const std::string& right) const {
  auto it = ranks_.find(pair_key(left, right));
  return it == ranks_.end() ? -1 : it->second;
}

MergeTable MergeTable::read(std::istream& in) {
  MergeTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("#version", 0) == 0) continue;
    if (line.empty()) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos || sp == 0 || sp + 1 >= line.size() ||
        line.find(' ', sp + 1) != std::string::npos) {
      throw DataError("expected 'left right'", line_no);
    }
    table.push_back({line.substr(0, sp), line.substr(sp + 1)});
  }
  return table;
}

MergeTable MergeTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open merge table " + path);
  return read(in);
}

void MergeTable::write(std::ostream& out) const {
  for (const auto& [a, b] : merges_) out << a << ' ' << b << '\n';
}

void MergeTable::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write merge table " + path);
  write(out);
  if (!out) throw IoError("write failed: " + path);
}

std::map<std::string, std::uint64_t> count_words(std::span<const std::string> lines) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto& line : lines) {
    for (auto& tok : textnorm::split_tokens(line)) ++counts[tok];
  }
  return counts;
}

MergeTable train(const std::map<std::string, std::uint64_t>& word_counts,
                 std::size_t num_merges, const BoundarySet* boundaries,
                 int min_frequency) {
  if (num_merges == 0) throw ConfigError("number of merges must be at least 1");
  if (min_frequency < 1) throw ConfigError("minimum pair frequency must be at least 1");
  struct Word {
    std::vector<std::string> syms;
    std::vector<std::size_t> starts;
    std::int64_t count = 0;
    const std::set<std::size_t>* bounds = nullptr;
  };
  std::vector<Word> words;
  for (const auto& [w, c] : word_counts) {
    if (w.empty() || c == 0) continue;
    Word word;
    initial_symbols(w, word.syms, word.starts);
    word.count = static_cast<std::int64_t>(c);
    word.bounds = boundaries ? boundaries->find(w) : nullptr;
    words.push_back(std::move(word));
  }
  if (words.empty()) throw DataError("cannot learn merges from an empty corpus");

  using Pair = MergeTable::Pair;
  std::map<Pair, std::int64_t> counts;
  std::map<Pair, std::set<std::size_t>> where;
  // Ordered by descending count, then ascending pair.
  std::set<std::pair<std::int64_t, Pair>> queue;

  auto bump = [&](const Pair& p, std::int64_t delta) {
    auto it = counts.find(p);
    std::int64_t old = it == counts.end() ? 0 : it->second;
    if (old > 0) queue.erase({-old, p});
    const std::int64_t now = old + delta;
    if (now > 0) {
      counts[p] = now;
      queue.insert({-now, p});
    } else if (it != counts.end()) {
      counts.erase(it);
    }
  };
  auto contribute = [&](std::size_t wi, std::int64_t sign) {
    const Word& w = words[wi];
    for (std::size_t i = 0; i + 1 < w.syms.size(); ++i) {
      if (blocked(w.bounds, w.starts[i + 1])) continue;
      Pair p{w.syms[i], w.syms[i + 1]};
      if (sign > 0) where[p].insert(wi);
      bump(p, sign * w.count);
    }
  };
  for (std::size_t wi = 0; wi < words.size(); ++wi) contribute(wi, 1);

  MergeTable table;
  table.set_vocab_threshold(min_frequency);
  while (table.size() < num_merges && !queue.empty()) {
    const auto [neg, best] = *queue.begin();
    if (-neg < min_frequency) break;
    table.push_back(best);
    const std::set<std::size_t> affected = where[best];
    for (std::size_t wi : affected) {
      Word& w = words[wi];
      bool present = false;
      for (std::size_t i = 0; i + 1 < w.syms.size() && !present; ++i) {
        present = w.syms[i] == best.first && w.syms[i + 1] == best.second &&
                  !blocked(w.bounds, w.starts[i + 1]);
      }
      if (!present) continue;
      contribute(wi, -1);
      merge_in_place(w.syms, w.starts, best.first, best.second, w.bounds);
      contribute(wi, 1);
    }
    where.erase(best);
  }
  return table;
}

std::vector<std::string> segment_word(const std::string& word, const MergeTable& table,
                                      const BoundarySet* boundaries) {
  std::vector<std::string> syms;
  std::vector<std::size_t> starts;
  initial_symbols(word, syms, starts);
  const std::set<std::size_t>* bounds = boundaries ? boundaries->find(word) : nullptr;
  while (syms.size() > 1) {
    long best = -1;
    std::size_t at = 0;
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
      if (blocked(bounds, starts[i + 1])) continue;
      const long r = table.rank(syms[i], syms[i + 1]);
      if (r >= 0 && (best < 0 || r < best)) {
        best = r;
        at = i;
      }
    }
    if (best < 0) break;
    const std::string a = syms[at];
    const std::string b = syms[at + 1];
    merge_in_place(syms, starts, a, b, bounds);
  }
  if (!syms.empty()) {
    const std::size_t marker = std::char_traits<char>::length(kEndOfWord);
    syms.back().resize(syms.back().size() - marker);
    for (std::size_t i = 0; i + 1 < syms.size(); ++i) syms[i] += kContinuation;
  }
  return syms;
}

const std::vector<std::string>& Segmenter::word(const std::string& w) {
  auto it = cache_.find(w);
  if (it == cache_.end()) {
    it = cache_.emplace(w, segment_word(w, table_, boundaries_)).first;
  }
  return it->second;
}

std::vector<std::string> Segmenter::apply(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    const auto& pieces = word(t);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return out;
}

std::string Segmenter::apply_line(const std::string& line) {
  const auto tokens = textnorm::split_tokens(line);
  return textnorm::join_tokens(apply(tokens));
}

std::vector<std::string> undo(std::span<const std::string> subwords) {
  std::vector<std::string> out;
  std::string pending;
  bool open = false;
  const std::string marker = kContinuation;
  for (const auto& piece : subwords) {
    if (piece.size() >= marker.size() &&
        piece.compare(piece.size() - marker.size(), marker.size(), marker) == 0) {
      pending.append(piece, 0, piece.size() - marker.size());
      open = true;
    } else {
      out.push_back(pending + piece);
      pending.clear();
      open = false;
    }
  }
  if (open) out.push_back(pending);
  return out;
}

std::string undo_line(const std::string& line) {
  const auto pieces = textnorm::split_tokens(line);
  return textnorm::join_tokens(undo(pieces));
}

}  // namespace corpusforge::bpe
