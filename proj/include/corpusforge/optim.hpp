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

// Adam and QHAdam with a linear warm-up / inverse square root learning
// rate schedule, plus small test problems to compare them on.

#ifndef CORPUSFORGE_OPTIM_HPP_
#define CORPUSFORGE_OPTIM_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace corpusforge::optim {

enum class Kind { kAdam, kQHAdam };

Kind kind_from_string(const std::string& s);
std::string to_string(Kind k);

struct OptimizerConfig {
  Kind kind = Kind::kAdam;
  double lr0 = 0.0005;
  std::int64_t warmup = 1600;
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
  double nu1 = 0.8;
  double nu2 = 0.7;

  void validate() const;
  nlohmann::json to_json() const;
  static OptimizerConfig from_json(const nlohmann::json& j);
};

// step <= warmup: lr0 * step / warmup; afterwards lr0 * sqrt(warmup / step).
double lr_at(std::int64_t step, const OptimizerConfig& config);

struct OptimizerState {
  std::int64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;

  explicit OptimizerState(std::size_t dim = 0) : m(dim, 0.0), v(dim, 0.0) {}
};

// Both advance `state` by one step and return the update; parameters move
// by minus the update.
std::vector<double> adam_step(OptimizerState& state, std::span<const double> grad,
                              const OptimizerConfig& config);
std::vector<double> qhadam_step(OptimizerState& state, std::span<const double> grad,
                                const OptimizerConfig& config);
std::vector<double> step(OptimizerState& state, std::span<const double> grad,
                         const OptimizerConfig& config);

class Problem {
 public:
  virtual ~Problem() = default;
  virtual std::string name() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual double loss(std::span<const double> x) const = 0;
  virtual std::vector<double> grad(std::span<const double> x) const = 0;
  virtual std::vector<double> start() const = 0;
  virtual std::optional<double> optimum_loss() const { return std::nullopt; }
};

// 0.5 (x - c)^T A (x - c) with A random symmetric positive definite.
std::unique_ptr<Problem> make_quadratic(std::size_t dim, std::uint64_t seed);
// sum x_i^2 from (1, ..., 1).
std::unique_ptr<Problem> make_sphere(std::size_t dim);
// (1 - x)^2 + 100 (y - x^2)^2 from (-1.2, 1).
std::unique_ptr<Problem> make_rosenbrock();
// Bundled problems by name: quadratic, sphere, rosenbrock.
std::unique_ptr<Problem> make_problem(const std::string& name, std::uint64_t seed = 1);
std::vector<std::string> problem_names();

// Max over coordinates of |fd - g| / max(1, |g|) with central differences.
double grad_check(const Problem& problem, std::span<const double> x, double h = 1e-5);

struct TrialOptions {
  std::int64_t steps = 1000;
  std::uint64_t seed = 1;
  double grad_noise = 0.0;  // stddev of Gaussian noise added to gradients
  double threshold = 1e-6;  // for steps_to_threshold
  std::size_t max_points = 200;
};

struct TrialResult {
  std::vector<double> losses;  // loss after each step, index 0 is the start
  double final_loss = 0.0;
  double best_loss = 0.0;
  std::optional<std::int64_t> steps_to_threshold;
  bool diverged = false;
  std::vector<double> final_params;

  nlohmann::json report(const OptimizerConfig& config, const std::string& problem,
                        std::size_t max_points) const;
};

TrialResult run_trial(const Problem& problem, const OptimizerConfig& config,
                      const TrialOptions& options);

}  // namespace corpusforge::optim

#endif  // CORPUSFORGE_OPTIM_HPP_
