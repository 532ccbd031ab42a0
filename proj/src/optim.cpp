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

#include "corpusforge/optim.hpp"

#include <cmath>
#include <limits>

#include "corpusforge/error.hpp"
#include "corpusforge/rng.hpp"

namespace corpusforge::optim {

Kind kind_from_string(const std::string& s) {
  if (s == "adam") return Kind::kAdam;
  if (s == "qhadam") return Kind::kQHAdam;
  throw ConfigError("unknown optimizer kind: " + s);
}

std::string to_string(Kind k) { return k == Kind::kAdam ? "adam" : "qhadam"; }

void OptimizerConfig::validate() const {
  if (!(lr0 > 0.0) || !std::isfinite(lr0)) throw ConfigError("lr0 must be positive");
  if (warmup < 1) throw ConfigError("warmup must be at least 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("betas must be in [0, 1)");
  }
  if (!(nu1 >= 0.0 && nu1 <= 1.0) || !(nu2 >= 0.0 && nu2 <= 1.0)) {
    throw ConfigError("nu1 and nu2 must be in [0, 1]");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be non-negative");
}

nlohmann::json OptimizerConfig::to_json() const {
  return {{"kind", to_string(kind)}, {"lr0", lr0},     {"warmup", warmup},
          {"beta1", beta1},          {"beta2", beta2}, {"eps", eps},
          {"nu1", nu1},              {"nu2", nu2}};
}

OptimizerConfig OptimizerConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("optimizer config must be an object");
  OptimizerConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "kind") c.kind = kind_from_string(value.get<std::string>());
      else if (key == "lr0") c.lr0 = value.get<double>();
      else if (key == "warmup") c.warmup = value.get<std::int64_t>();
      else if (key == "beta1") c.beta1 = value.get<double>();
      else if (key == "beta2") c.beta2 = value.get<double>();
      else if (key == "eps") c.eps = value.get<double>();
      else if (key == "nu1") c.nu1 = value.get<double>();
      else if (key == "nu2") c.nu2 = value.get<double>();
      else throw ConfigError("unknown config key: optim." + key);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("bad type for optim." + key);
    }
  }
  c.validate();
  return c;
}

double lr_at(std::int64_t step, const OptimizerConfig& config) {
  if (step < 1) throw ConfigError("learning rate is defined for steps >= 1");
  const double s = static_cast<double>(step);
  const double w = static_cast<double>(config.warmup);
  if (step <= config.warmup) return config.lr0 * s / w;
  return config.lr0 * std::sqrt(w / s);
}

namespace {

void advance(OptimizerState& state, std::span<const double> grad) {
  if (state.m.size() != grad.size() || state.v.size() != grad.size()) {
    throw ConfigError("gradient dimension does not match optimizer state");
  }
  for (double g : grad) {
    if (!std::isfinite(g)) throw DataError("non-finite gradient");
  }
  ++state.step;
}

void update_moments(OptimizerState& state, std::span<const double> grad,
                    const OptimizerConfig& c) {
  for (std::size_t i = 0; i < grad.size(); ++i) {
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * grad[i];
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * grad[i] * grad[i];
  }
}

}  // namespace

std::vector<double> adam_step(OptimizerState& state, std::span<const double> grad,
                              const OptimizerConfig& config) {
  advance(state, grad);
  update_moments(state, grad, config);
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  const double lr = lr_at(state.step, config);
  std::vector<double> update(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    update[i] = lr * m_hat / (std::sqrt(v_hat) + config.eps);
  }
  return update;
}

std::vector<double> qhadam_step(OptimizerState& state, std::span<const double> grad,
                                const OptimizerConfig& config) {
  advance(state, grad);
  update_moments(state, grad, config);
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  const double lr = lr_at(state.step, config);
  const double nu1 = config.nu1;
  const double nu2 = config.nu2;
  std::vector<double> update(grad.size());
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double g = grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    const double num = (1.0 - nu1) * g + nu1 * m_hat;
    const double den = (1.0 - nu2) * g * g + nu2 * v_hat;
    update[i] = lr * num / (std::sqrt(den) + config.eps);
  }
  return update;
}

std::vector<double> step(OptimizerState& state, std::span<const double> grad,
                         const OptimizerConfig& config) {
  return config.kind == Kind::kAdam ? adam_step(state, grad, config)
                                    : qhadam_step(state, grad, config);
}

namespace {

class Quadratic final : public Problem {
 public:
  Quadratic(std::size_t dim, std::uint64_t seed) : dim_(dim), a_(dim * dim), c_(dim) {
    Rng rng(seed);
    // A = B B^T / dim + I keeps the condition number moderate.
    std::vector<double> b(dim * dim);
    for (double& x : b) x = rng.normal();
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim; ++k) s += b[i * dim + k] * b[j * dim + k];
        a_[i * dim + j] = s / static_cast<double>(dim) + (i == j ? 1.0 : 0.0);
      }
    }
    for (double& x : c_) x = rng.normal();
  }

  std::string name() const override { return "quadratic"; }
  std::size_t dimension() const override { return dim_; }

  double loss(std::span<const double> x) const override {
    const auto d = diff(x);
    double s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) row += a_[i * dim_ + j] * d[j];
      s += d[i] * row;
    }
    return 0.5 * s;
  }

  std::vector<double> grad(std::span<const double> x) const override {
    const auto d = diff(x);
    std::vector<double> g(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) g[i] += a_[i * dim_ + j] * d[j];
    }
    return g;
  }

  std::vector<double> start() const override { return std::vector<double>(dim_, 0.0); }
  std::optional<double> optimum_loss() const override { return 0.0; }

 private:
  std::vector<double> diff(std::span<const double> x) const {
    std::vector<double> d(dim_);
    for (std::size_t i = 0; i < dim_; ++i) d[i] = x[i] - c_[i];
    return d;
  }

  std::size_t dim_;
  std::vector<double> a_;
  std::vector<double> c_;
};

class Sphere final : public Problem {
 public:
  explicit Sphere(std::size_t dim) : dim_(dim) {}
  std::string name() const override { return "sphere"; }
  std::size_t dimension() const override { return dim_; }
  double loss(std::span<const double> x) const override {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }
  std::vector<double> grad(std::span<const double> x) const override {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] = 2.0 * x[i];
    return g;
  }
  std::vector<double> start() const override { return std::vector<double>(dim_, 1.0); }
  std::optional<double> optimum_loss() const override { return 0.0; }

 private:
  std::size_t dim_;
};

class Rosenbrock final : public Problem {
 public:
  std::string name() const override { return "rosenbrock"; }
  std::size_t dimension() const override { return 2; }
  double loss(std::span<const double> p) const override {
    const double a = 1.0 - p[0];
    const double b = p[1] - p[0] * p[0];
    return a * a + 100.0 * b * b;
  }
  std::vector<double> grad(std::span<const double> p) const override {
    const double b = p[1] - p[0] * p[0];
    return {-2.0 * (1.0 - p[0]) - 400.0 * p[0] * b, 200.0 * b};
  }
  std::vector<double> start() const override { return {-1.2, 1.0}; }
  std::optional<double> optimum_loss() const override { return 0.0; }
};

}  // namespace

std::unique_ptr<Problem> make_quadratic(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("dimension must be positive");
  return std::make_unique<Quadratic>(dim, seed);
}

std::unique_ptr<Problem> make_sphere(std::size_t dim) {
  if (dim == 0) throw ConfigError("dimension must be positive");
  return std::make_unique<Sphere>(dim);
}

std::unique_ptr<Problem> make_rosenbrock() { return std::make_unique<Rosenbrock>(); }

std::unique_ptr<Problem> make_problem(const std::string& name, std::uint64_t seed) {
  if (name == "quadratic") return make_quadratic(50, seed);
  if (name == "sphere") return make_sphere(10);
  if (name == "rosenbrock") return make_rosenbrock();
  throw ConfigError("unknown problem: " + name);
}

std::vector<std::string> problem_names() { return {"quadratic", "sphere", "rosenbrock"}; }

double grad_check(const Problem& problem, std::span<const double> x, double h) {
  if (x.size() != problem.dimension()) throw ConfigError("point has the wrong dimension");
  const auto g = problem.grad(x);
  std::vector<double> p(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double orig = p[i];
    p[i] = orig + h;
    const double up = problem.loss(p);
    p[i] = orig - h;
    const double down = problem.loss(p);
    p[i] = orig;
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw DataError("loss is not finite near the check point");
    }
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
  }
  return worst;
}

TrialResult run_trial(const Problem& problem, const OptimizerConfig& config,
                      const TrialOptions& options) {
  config.validate();
  if (options.steps < 0) throw ConfigError("steps must be non-negative");
  Rng rng(options.seed);
  std::vector<double> x = problem.start();
  OptimizerState state(x.size());
  TrialResult r;
  double loss = problem.loss(x);
  r.losses.push_back(loss);
  r.best_loss = loss;
  if (loss <= options.threshold) r.steps_to_threshold = 0;
  for (std::int64_t t = 1; t <= options.steps; ++t) {
    auto g = problem.grad(x);
    if (options.grad_noise > 0.0) {
      for (double& gi : g) gi += options.grad_noise * rng.normal();
    }
    bool finite = true;
    for (double gi : g) finite = finite && std::isfinite(gi);
    if (!finite) {
      r.diverged = true;
      break;
    }
    const auto u = step(state, g, config);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= u[i];
    loss = problem.loss(x);
    r.losses.push_back(loss);
    if (!std::isfinite(loss) || loss > 1e12) {
      r.diverged = true;
      break;
    }
    r.best_loss = std::min(r.best_loss, loss);
    if (!r.steps_to_threshold && loss <= options.threshold) r.steps_to_threshold = t;
  }
  r.final_loss = r.losses.back();
  r.final_params = x;
  return r;
}

nlohmann::json TrialResult::report(const OptimizerConfig& config, const std::string& problem,
                                   std::size_t max_points) const {
  nlohmann::json traj = nlohmann::json::array();
  const std::size_t n = losses.size();
  const std::size_t stride = max_points == 0 || n <= max_points ? 1 : (n + max_points - 1) / max_points;
  for (std::size_t i = 0; i < n; i += stride) traj.push_back({{"step", i}, {"loss", losses[i]}});
  if (n > 0 && (n - 1) % stride != 0) traj.push_back({{"step", n - 1}, {"loss", losses[n - 1]}});
  nlohmann::json j = {{"config", config.to_json()},
                      {"problem", problem},
                      {"trajectory", traj},
                      {"final_loss", final_loss},
                      {"best_loss", best_loss},
                      {"diverged", diverged}};
  j["steps_to_threshold"] = steps_to_threshold ? nlohmann::json(*steps_to_threshold)
                                               : nlohmann::json(nullptr);
  return j;
}

}  // namespace corpusforge::optim
