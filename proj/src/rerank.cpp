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

#include "corpusforge/rerank.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "corpusforge/error.hpp"
#include "corpusforge/textnorm.hpp"

namespace corpusforge::rerank {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_id(const std::string& s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void RerankConfig::validate() const {
  if (n < 1) throw ConfigError("n-best size must be at least 1");
  if (!std::isfinite(w_l2r) || !std::isfinite(w_r2l)) {
    throw ConfigError("re-ranking weights must be finite");
  }
}

NBestGroups parse_nbest(std::istream& in, int max_per_id) {
  NBestGroups groups;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto sep = line.find("|||", start);
      fields.push_back(trim(std::string_view(line).substr(
          start, sep == std::string::npos ? std::string::npos : sep - start)));
      if (sep == std::string::npos) break;
      start = sep + 3;
    }
    if (fields.size() != 4) {
      throw DataError("expected 4 '|||'-separated fields, found " +
                      std::to_string(fields.size()), line_no);
    }
    NBestEntry e;
    if (!parse_id(fields[0], e.sent_id)) {
      throw DataError("bad sentence id '" + fields[0] + "'", line_no);
    }
    e.tokens = textnorm::join_tokens(textnorm::split_tokens(fields[1]));
    for (const auto& item : textnorm::split_tokens(fields[2])) {
      if (!item.empty() && item.back() == '=') {
        e.features.emplace_back(item.substr(0, item.size() - 1), std::vector<double>{});
        continue;
      }
      double v = 0.0;
      if (e.features.empty() || !parse_double(item, v)) {
        throw DataError("bad feature field '" + item + "'", line_no);
      }
      e.features.back().second.push_back(v);
    }
    if (!parse_double(fields[3], e.total)) {
      throw DataError("bad total score '" + fields[3] + "'", line_no);
    }
    auto& group = groups[e.sent_id];
    if (max_per_id <= 0 || group.size() < static_cast<std::size_t>(max_per_id)) {
      group.push_back(std::move(e));
    }
  }
  return groups;
}

NBestGroups parse_nbest_file(const std::string& path, int max_per_id) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open n-best list " + path);
  return parse_nbest(in, max_per_id);
}

std::string format_entry(const NBestEntry& e) {
  std::string out = std::to_string(e.sent_id) + " ||| " + e.tokens + " |||";
  for (const auto& [name, values] : e.features) {
    out += ' ';
    out += name;
    out += '=';
    for (double v : values) out += ' ' + format_double(v);
  }
  out += " ||| " + format_double(e.total);
  return out;
}

R2LScores parse_r2l(std::istream& in) {
  R2LScores scores;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw DataError("expected id<TAB>logprob<TAB>tokens", line_no);
    std::int64_t id = 0;
    double value = 0.0;
    if (!parse_id(line.substr(0, t1), id)) throw DataError("bad sentence id", line_no);
    if (!parse_double(line.substr(t1 + 1, t2 - t1 - 1), value)) {
      throw DataError("bad log-probability", line_no);
    }
    std::string tokens = textnorm::join_tokens(textnorm::split_tokens(line.substr(t2 + 1)));
    auto [it, fresh] = scores.emplace(std::make_pair(id, tokens), value);
    if (!fresh && it->second != value) {
      throw DataError("conflicting scores for id " + std::to_string(id) + " '" + tokens + "'",
                      line_no);
    }
  }
  return scores;
}

R2LScores parse_r2l_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open r2l score file " + path);
  return parse_r2l(in);
}

void join_r2l(NBestGroups& groups, const R2LScores& scores) {
  std::string missing;
  std::size_t n_missing = 0;
  for (auto& [id, group] : groups) {
    for (auto& e : group) {
      auto it = scores.find({id, e.tokens});
      if (it == scores.end()) {
        ++n_missing;
        missing += "\n  " + std::to_string(id) + "\t" + e.tokens;
        continue;
      }
      e.r2l = it->second;
      e.has_r2l = true;
    }
  }
  if (n_missing > 0) {
    throw DataError(std::to_string(n_missing) + " hypotheses have no r2l score:" + missing);
  }
}

std::size_t best_index(const std::vector<NBestEntry>& group, const RerankConfig& config) {
  if (group.empty()) throw DataError("empty n-best group");
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    const double s = config.w_l2r * group[i].total + config.w_r2l * group[i].r2l;
    if (i == 0 || s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

RerankResult rerank(const NBestGroups& groups, const RerankConfig& config) {
  config.validate();
  RerankResult result;
  for (const auto& [id, group] : groups) {
    if (group.empty()) throw DataError("empty n-best group for id " + std::to_string(id));
    std::vector<NBestEntry> scored;
    const std::size_t keep = std::min(group.size(), static_cast<std::size_t>(config.n));
    for (std::size_t i = 0; i < keep; ++i) {
      NBestEntry e = group[i];
      if (config.w_r2l != 0.0 && !e.has_r2l) {
        throw DataError("hypothesis without r2l score for id " + std::to_string(id));
      }
      e.combined = config.w_l2r * e.total + config.w_r2l * e.r2l;
      scored.push_back(std::move(e));
    }
    result.best.push_back(scored[best_index(scored, config)]);
    std::stable_sort(scored.begin(), scored.end(),
                     [](const NBestEntry& a, const NBestEntry& b) {
                       return a.combined > b.combined;
                     });
    result.sorted.emplace(id, std::move(scored));
  }
  return result;
}

}  // namespace corpusforge::rerank
