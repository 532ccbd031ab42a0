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

// Configured multi-stage runs. Each stage writes its outputs, a manifest
// and a report under <workdir>/<stage>/; a run summary with the line
// retention table goes to <workdir>/summary.json.

#ifndef CORPUSFORGE_PIPELINE_HPP_
#define CORPUSFORGE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "corpusforge/corpus.hpp"
#include "json.hpp"

namespace corpusforge::pipeline {

namespace fs = std::filesystem;

// Stages always run in this order, whatever order the config lists them in.
const std::vector<std::string>& stage_order();

struct PipelineConfig {
  unsigned threads = 1;
  std::uint64_t seed = 1;
  fs::path workdir = "work";
  nlohmann::json inputs = nlohmann::json::object();  // paths already resolved
  std::vector<std::string> stages;                   // canonical order
  nlohmann::json sections = nlohmann::json::object();

  // Strict: unknown keys anywhere raise ConfigError naming the key.
  // Relative paths resolve against `base_dir`.
  static PipelineConfig from_json(const nlohmann::json& j, const fs::path& base_dir);
  static PipelineConfig load(const fs::path& path);

  // CORPUSFORGE_THREADS and CORPUSFORGE_WORKDIR.
  void apply_environment();
};

struct StageRun {
  std::string name;
  Manifest manifest;
};

struct PipelineResult {
  std::vector<StageRun> stages;
  nlohmann::json summary;
};

PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace corpusforge::pipeline

#endif  // CORPUSFORGE_PIPELINE_HPP_
