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

#include "corpusforge/textnorm.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>

#include "corpusforge/corpus.hpp"
#include "corpusforge/error.hpp"
#include "corpusforge/unicode.hpp"

namespace corpusforge::textnorm {
namespace {

bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view p) {
  if (pos + p.size() > s.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    char c = s[pos + i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (c != p[i]) return false;
  }
  return true;
}

bool is_ascii_alpha(char c) { return (c | 0x20) >= 'a' && (c | 0x20) <= 'z'; }
bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || is_ascii_digit(c); }

// Decodes one level of HTML entities. Unknown or invalid entities are kept.
std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out.push_back(s[i++]);
      continue;
    }
    const std::string_view name = s.substr(i + 1, semi - i - 1);
    char32_t cp = 0;
    if (name == "amp") {
      cp = '&';
    } else if (name == "lt") {
      cp = '<';
    } else if (name == "gt") {
      cp = '>';
    } else if (name == "quot") {
      cp = '"';
    } else if (name == "apos") {
      cp = '\'';
    } else if (name == "nbsp") {
      cp = 0xA0;
    } else if (name.size() >= 2 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      std::uint32_t v = 0;
      auto r = std::from_chars(digits.data(), digits.data() + digits.size(), v,
                               hex ? 16 : 10);
      if (!digits.empty() && r.ec == std::errc() &&
          r.ptr == digits.data() + digits.size() && v > 0 && v <= 0x10FFFF &&
          !(v >= 0xD800 && v <= 0xDFFF)) {
        cp = v;
      }
    }
    if (cp == 0) {
      out.push_back(s[i++]);
      continue;
    }
    utf8::append(out, cp);
    i = semi + 1;
  }
  return out;
}

char32_t map_char(char32_t cp) {
  switch (cp) {
    case 0x201C: case 0x201D: case 0x201E: case 0x201F:
    case 0x00AB: case 0x00BB: case 0x301D: case 0x301E: case 0xFF02:
      return '"';
    case 0x2018: case 0x2019: case 0x201A: case 0x201B:
    case 0x02BC: case 0x2039: case 0x203A: case 0xFF07:
      return '\'';
    case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014:
    case 0x2015:
      return '-';
    default:
      return cp;
  }
}

bool is_url_stop(char c) {
  return c == ' ' || c == '\t' || c == '<';
}

bool is_url_trailing(char c) {
  return std::string_view(".,;:!?)]}'\"").find(c) != std::string_view::npos;
}

std::size_t match_url(std::string_view s, std::size_t i) {
  if (i > 0 && (is_ascii_alnum(s[i - 1]) ||
                static_cast<unsigned char>(s[i - 1]) >= 0x80)) {
    return 0;
  }
  std::size_t prefix = 0;
  if (starts_with_ci(s, i, "https://")) {
    prefix = 8;
  } else if (starts_with_ci(s, i, "http://")) {
    prefix = 7;
  } else if (starts_with_ci(s, i, "www.")) {
    prefix = 4;
  } else {
    return 0;
  }
  std::size_t end = i + prefix;
  while (end < s.size() && !is_url_stop(s[end])) ++end;
  while (end > i + prefix && is_url_trailing(s[end - 1])) --end;
  return end > i + prefix ? end - i : 0;
}

bool is_local_char(char c) {
  return is_ascii_alnum(c) ||
         std::string_view("._%+-").find(c) != std::string_view::npos;
}

std::size_t match_email(std::string_view s, std::size_t i) {
  if (!is_local_char(s[i]) || s[i] == '.') return 0;
  if (i > 0 && is_local_char(s[i - 1])) return 0;
  std::size_t at = i;
  while (at < s.size() && is_local_char(s[at])) ++at;
  if (at >= s.size() || s[at] != '@' || at == i) return 0;
  std::size_t end = at + 1;
  while (end < s.size() && (is_ascii_alnum(s[end]) || s[end] == '.' ||
                            s[end] == '-')) {
    ++end;
  }
  while (end > at + 1 && (s[end - 1] == '.' || s[end - 1] == '-')) --end;
  const std::string_view domain = s.substr(at + 1, end - at - 1);
  const std::size_t last_dot = domain.rfind('.');
  if (last_dot == std::string_view::npos) return 0;
  std::size_t label_start = 0;
  while (label_start <= domain.size()) {
    std::size_t dot = domain.find('.', label_start);
    if (dot == std::string_view::npos) dot = domain.size();
    if (dot == label_start) return 0;
    label_start = dot + 1;
  }
  const std::string_view tld = domain.substr(last_dot + 1);
  if (tld.size() < 2 || !std::all_of(tld.begin(), tld.end(), is_ascii_alpha)) {
    return 0;
  }
  return end - i;
}

std::size_t match_tag(std::string_view s, std::size_t i) {
  if (s[i] != '<' || i + 1 >= s.size()) return 0;
  const char c = s[i + 1];
  if (!(is_ascii_alpha(c) || c == '/' || c == '!' || c == '?')) return 0;
  std::size_t j = i + 1;
  while (j < s.size() && s[j] != '<' && s[j] != '>') ++j;
  if (j >= s.size() || s[j] != '>') return 0;
  return j + 1 - i;
}

// Length of a `__KIND_n__` placeholder starting at s[i], or 0.
template <typename Str>
std::size_t placeholder_at(const Str& s, std::size_t i,
                           PlaceholderKind* kind = nullptr,
                           int* index = nullptr) {
  auto at = [&](std::size_t k) -> char32_t {
    return k < s.size() ? static_cast<char32_t>(s[k]) : 0;
  };
  if (at(i) != '_' || at(i + 1) != '_') return 0;
  std::size_t k = i + 2;
  PlaceholderKind found;
  auto word = [&](std::string_view w) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (at(k + j) != static_cast<char32_t>(w[j])) return false;
    }
    return true;
  };
  if (word("EMAIL_")) {
    found = PlaceholderKind::kEmail;
    k += 6;
  } else if (word("URL_")) {
    found = PlaceholderKind::kUrl;
    k += 4;
  } else if (word("TAG_")) {
    found = PlaceholderKind::kTag;
    k += 4;
  } else {
    return 0;
  }
  const std::size_t digits_start = k;
  long long value = 0;
  while (at(k) >= '0' && at(k) <= '9' && k - digits_start < 9) {
    value = value * 10 + static_cast<long long>(at(k) - '0');
    ++k;
  }
  if (k == digits_start || at(k) != '_' || at(k + 1) != '_') return 0;
  if (kind) *kind = found;
  if (index) *index = static_cast<int>(value);
  return k + 2 - i;
}

bool is_joiner(char32_t c) {
  return c == '\'' || c == '-' || c == 0x2019 || c == 0x2010 || c == 0x2011;
}

void split_segment(std::u32string_view seg, Tokens& out) {
  std::u32string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(utf8::from_u32(cur));
      cur.clear();
    }
  };
  for (std::size_t k = 0; k < seg.size(); ++k) {
    const char32_t c = seg[k];
    if (!utf8::is_punct(c)) {
      cur.push_back(c);
      continue;
    }
    const bool inner = k > 0 && k + 1 < seg.size();
    const bool keep =
        inner && ((is_joiner(c) && utf8::is_alnum(seg[k - 1]) &&
                   utf8::is_alnum(seg[k + 1])) ||
                  ((c == '.' || c == ',') && utf8::is_digit(seg[k - 1]) &&
                   utf8::is_digit(seg[k + 1])));
    if (keep) {
      cur.push_back(c);
      continue;
    }
    flush();
    out.push_back(utf8::from_u32(std::u32string_view(&seg[k], 1)));
  }
  flush();
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string decoded(text);
  for (;;) {
    std::string next = decode_entities(decoded);
    if (next == decoded) break;
    decoded = std::move(next);
  }
  std::string out;
  out.reserve(decoded.size());
  bool pending_space = false;
  std::size_t pos = 0;
  while (pos < decoded.size()) {
    char32_t cp = map_char(utf8::decode(decoded, pos));
    if (utf8::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    utf8::append(out, cp);
  }
  return out;
}

std::string_view kind_name(PlaceholderKind kind) {
  switch (kind) {
    case PlaceholderKind::kEmail: return "EMAIL";
    case PlaceholderKind::kUrl: return "URL";
    case PlaceholderKind::kTag: return "TAG";
  }
  return "URL";
}

nlohmann::json PlaceholderMap::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : slots) {
    arr.push_back({{"kind", kind_name(s.kind)},
                   {"index", s.index},
                   {"original", s.original}});
  }
  return arr;
}

PlaceholderMap PlaceholderMap::from_json(const nlohmann::json& j) {
  PlaceholderMap m;
  try {
    for (const auto& e : j) {
      PlaceholderSlot slot;
      const auto kind = e.at("kind").get<std::string>();
      if (kind == "EMAIL") {
        slot.kind = PlaceholderKind::kEmail;
      } else if (kind == "URL") {
        slot.kind = PlaceholderKind::kUrl;
      } else if (kind == "TAG") {
        slot.kind = PlaceholderKind::kTag;
      } else {
        throw DataError("unknown placeholder kind: " + kind);
      }
      slot.index = e.at("index").get<int>();
      slot.original = e.at("original").get<std::string>();
      m.slots.push_back(std::move(slot));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("malformed placeholder map: ") + ex.what());
  }
  return m;
}

Masked mask_placeholders(std::string_view text) {
  Masked result;
  int counters[3] = {0, 0, 0};
  std::size_t i = 0;
  while (i < text.size()) {
    const std::size_t url = match_url(text, i);
    const std::size_t email = match_email(text, i);
    const std::size_t tag = match_tag(text, i);
    std::size_t len = url;
    PlaceholderKind kind = PlaceholderKind::kUrl;
    if (email > len) {
      len = email;
      kind = PlaceholderKind::kEmail;
    }
    if (tag > len) {
      len = tag;
      kind = PlaceholderKind::kTag;
    }
    if (len == 0) {
      result.text.push_back(text[i++]);
      continue;
    }
    const int n = ++counters[static_cast<int>(kind)];
    result.text += "__";
    result.text += kind_name(kind);
    result.text += "_" + std::to_string(n) + "__";
    result.map.slots.push_back({kind, n, std::string(text.substr(i, len))});
    i += len;
  }
  return result;
}

Unmasked unmask(std::string_view text, const PlaceholderMap& map) {
  Unmasked result;
  std::vector<bool> used(map.slots.size(), false);
  std::size_t i = 0;
  while (i < text.size()) {
    PlaceholderKind kind;
    int index = 0;
    const std::size_t len = placeholder_at(text, i, &kind, &index);
    if (len == 0) {
      result.text.push_back(text[i++]);
      continue;
    }
    bool found = false;
    for (std::size_t s = 0; s < map.slots.size(); ++s) {
      if (map.slots[s].kind == kind && map.slots[s].index == index) {
        result.text += map.slots[s].original;
        used[s] = true;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DataError("no slot for placeholder " +
                      std::string(text.substr(i, len)));
    }
    i += len;
  }
  result.unused_slots =
      static_cast<std::size_t>(std::count(used.begin(), used.end(), false));
  return result;
}

Tokens tokenize(std::string_view text) {
  Tokens out;
  const std::u32string u = utf8::to_u32(text);
  std::size_t i = 0;
  while (i < u.size()) {
    while (i < u.size() && utf8::is_space(u[i])) ++i;
    std::size_t end = i;
    while (end < u.size() && !utf8::is_space(u[end])) ++end;
    std::size_t seg = i;
    std::size_t k = i;
    while (k < end) {
      const std::size_t len = placeholder_at(std::u32string_view(u).substr(0, end), k);
      if (len == 0) {
        ++k;
        continue;
      }
      split_segment(std::u32string_view(u).substr(seg, k - seg), out);
      out.push_back(utf8::from_u32(std::u32string_view(u).substr(k, len)));
      k += len;
      seg = k;
    }
    split_segment(std::u32string_view(u).substr(seg, end - seg), out);
    i = end;
  }
  return out;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) joined.push_back(' ');
    joined += tokens[i];
  }
  static constexpr std::string_view kNoSpaceBefore = ",.;:!?)]}%";
  static constexpr std::string_view kNoSpaceAfter = "([{";
  std::string out;
  out.reserve(joined.size());
  for (std::size_t i = 0; i < joined.size(); ++i) {
    const char c = joined[i];
    if (c == ' ') {
      if (out.empty() || out.back() == ' ') continue;
      if (kNoSpaceAfter.find(out.back()) != std::string_view::npos) continue;
      if (i + 1 < joined.size() &&
          kNoSpaceBefore.find(joined[i + 1]) != std::string_view::npos) {
        continue;
      }
    }
    out.push_back(c);
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

Tokens split_tokens(std::string_view line) {
  Tokens out;
  std::size_t i = 0;
  while (i <= line.size()) {
    std::size_t sp = line.find(' ', i);
    if (sp == std::string_view::npos) sp = line.size();
    if (sp > i) out.emplace_back(line.substr(i, sp - i));
    i = sp + 1;
  }
  return out;
}

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

TruecaseModel TruecaseModel::train(std::span<const Tokens> corpus) {
  TruecaseModel m;
  for (const auto& sentence : corpus) m.observe(sentence);
  m.finalize();
  return m;
}

void TruecaseModel::observe(std::span<const std::string> sentence) {
  for (std::size_t i = 1; i < sentence.size(); ++i) {
    auto [it, inserted] = counts_.try_emplace(sentence[i], 0);
    ++it->second;
    if (inserted) first_seen_[sentence[i]] = position_++;
  }
}

void TruecaseModel::finalize() {
  table_.clear();
  for (const auto& [surface, count] : counts_) {
    const std::string key = utf8::lower(surface);
    auto it = table_.find(key);
    if (it == table_.end()) {
      table_.emplace(key, surface);
      continue;
    }
    const std::uint64_t best = counts_.at(it->second);
    if (count > best ||
        (count == best && first_seen_.at(surface) < first_seen_.at(it->second))) {
      it->second = surface;
    }
  }
}

Tokens TruecaseModel::apply(std::span<const std::string> tokens) const {
  Tokens out(tokens.begin(), tokens.end());
  if (out.empty()) return out;
  const std::string key = utf8::lower(out[0]);
  if (auto it = table_.find(key); it != table_.end()) {
    out[0] = it->second;
  } else if (counts_.count(key)) {
    out[0] = key;
  }
  return out;
}

void TruecaseModel::save(const std::filesystem::path& path) const {
  struct Row {
    std::string key;
    std::string surface;
    std::uint64_t count;
    std::uint64_t first;
  };
  std::vector<Row> rows;
  rows.reserve(counts_.size());
  for (const auto& [surface, count] : counts_) {
    rows.push_back({utf8::lower(surface), surface, count, first_seen_.at(surface)});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.count != b.count) return a.count > b.count;
    return a.first < b.first;
  });
  std::vector<std::string> lines;
  lines.reserve(rows.size());
  for (const auto& r : rows) lines.push_back(r.surface + "\t" + std::to_string(r.count));
  write_lines(lines, path);
}

TruecaseModel TruecaseModel::load(const std::filesystem::path& path) {
  TruecaseModel m;
  const auto lines = read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    const std::size_t tab = l.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError("expected surface<TAB>count", i + 1);
    }
    std::uint64_t count = 0;
    auto r = std::from_chars(l.data() + tab + 1, l.data() + l.size(), count);
    if (r.ec != std::errc() || r.ptr != l.data() + l.size()) {
      throw DataError("bad count in truecase model", i + 1);
    }
    const std::string surface = l.substr(0, tab);
    if (m.counts_.count(surface)) {
      throw DataError("duplicate surface form in truecase model", i + 1);
    }
    m.counts_[surface] = count;
    m.first_seen_[surface] = m.position_++;
  }
  m.finalize();
  return m;
}

Tokens detruecase(std::span<const std::string> tokens) {
  Tokens out(tokens.begin(), tokens.end());
  if (!out.empty()) out[0] = utf8::upper_first(out[0]);
  return out;
}

}  // namespace corpusforge::textnorm
