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

#include <cmath>
#include <string>
#include <vector>

#include "corpusforge/error.hpp"
#include "corpusforge/optim.hpp"
#include "corpusforge/rng.hpp"
#include "doctest.h"

using namespace corpusforge;
using namespace corpusforge::optim;

namespace {

class Parabola final : public Problem {
 public:
  std::string name() const override { return "parabola"; }
  std::size_t dimension() const override { return 1; }
  double loss(std::span<const double> x) const override { return x[0] * x[0]; }
  std::vector<double> grad(std::span<const double> x) const override { return {2 * x[0]}; }
  std::vector<double> start() const override { return {1.0}; }
};

class WrongGradient final : public Problem {
 public:
  std::string name() const override { return "wrong"; }
  std::size_t dimension() const override { return 3; }
  double loss(std::span<const double> x) const override {
    return x[0] * x[0] + 3 * x[1] + std::sin(x[2]);
  }
  std::vector<double> grad(std::span<const double> x) const override {
    return {2 * x[0], 2.0, std::cos(x[2])};
  }
  std::vector<double> start() const override { return {0.5, 0.5, 0.5}; }
};

class Zero final : public Problem {
 public:
  std::string name() const override { return "zero"; }
  std::size_t dimension() const override { return 4; }
  double loss(std::span<const double>) const override { return 0.0; }
  std::vector<double> grad(std::span<const double>) const override { return {0, 0, 0, 0}; }
  std::vector<double> start() const override { return {1, 2, 3, 4}; }
};

class Exploding final : public Problem {
 public:
  std::string name() const override { return "exploding"; }
  std::size_t dimension() const override { return 1; }
  // The gradient points uphill, so every step grows the loss.
  double loss(std::span<const double> x) const override { return std::exp(x[0]); }
  std::vector<double> grad(std::span<const double> x) const override { return {-std::exp(x[0])}; }
  std::vector<double> start() const override { return {0.0}; }
};

OptimizerConfig config(Kind kind, double lr0, std::int64_t warmup) {
  OptimizerConfig c;
  c.kind = kind;
  c.lr0 = lr0;
  c.warmup = warmup;
  return c;
}

}  // namespace

TEST_CASE("learning rate schedule values") {
  OptimizerConfig c;
  CHECK(lr_at(1600, c) == doctest::Approx(0.0005).epsilon(1e-15));
  CHECK(lr_at(800, c) == doctest::Approx(0.00025).epsilon(1e-15));
  CHECK(lr_at(6400, c) == doctest::Approx(0.00025).epsilon(1e-15));
  CHECK(lr_at(1, c) == doctest::Approx(0.0005 / 1600).epsilon(1e-15));
  CHECK_THROWS_AS(lr_at(0, c), ConfigError);
  // Continuous at the end of warm-up.
  CHECK(lr_at(1601, c) == doctest::Approx(lr_at(1600, c)).epsilon(1e-3));
  for (std::int64_t s = 1; s < 1600; ++s) CHECK(lr_at(s, c) < lr_at(s + 1, c));
  for (std::int64_t s = 1600; s < 5000; ++s) CHECK(lr_at(s, c) > lr_at(s + 1, c));
}

TEST_CASE("Adam: zero gradient and first-step sign") {
  OptimizerConfig c = config(Kind::kAdam, 0.1, 1);
  OptimizerState zero(3);
  auto u = adam_step(zero, std::vector<double>{0, 0, 0}, c);
  for (double v : u) CHECK(v == 0.0);

  for (double g : {3.0, -0.5, 1e-4}) {
    OptimizerState s(1);
    auto step1 = adam_step(s, std::vector<double>{g}, c);
    CHECK(step1[0] == doctest::Approx(0.1 * g / (std::abs(g) + c.eps)).epsilon(1e-12));
    CHECK(std::abs(step1[0]) == doctest::Approx(0.1).epsilon(1e-4));
  }
}

TEST_CASE("Adam on a parabola decreases the loss monotonically") {
  Parabola p;
  TrialOptions opt;
  opt.steps = 100;
  auto r = run_trial(p, config(Kind::kAdam, 0.01, 10), opt);
  REQUIRE(r.losses.size() == 101);
  for (std::size_t i = 1; i < r.losses.size(); ++i) CHECK(r.losses[i] < r.losses[i - 1]);
}

TEST_CASE("QHAdam reduces to Adam with unit nu") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto prob = make_quadratic(8, 100 + trial);
    OptimizerConfig qc = config(Kind::kQHAdam, 0.05, 10);
    qc.nu1 = qc.nu2 = 1.0;
    OptimizerConfig ac = qc;
    ac.kind = Kind::kAdam;
    std::vector<double> xa = prob->start(), xq = prob->start();
    OptimizerState sa(8), sq(8);
    for (int t = 0; t < 100; ++t) {
      auto ua = adam_step(sa, prob->grad(xa), ac);
      auto uq = qhadam_step(sq, prob->grad(xq), qc);
      for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(ua[i] - uq[i]) <= 1e-12);
        xa[i] -= ua[i];
        xq[i] -= uq[i];
      }
    }
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(xa[i] - xq[i]) <= 1e-12);
  }
}

TEST_CASE("QHAdam with zero nu is a scaled sign step") {
  OptimizerConfig c = config(Kind::kQHAdam, 0.2, 1);
  c.nu1 = c.nu2 = 0.0;
  OptimizerState s(3);
  adam_step(s, std::vector<double>{5, 5, 5}, c);
  const std::vector<double> g = {2.0, -0.25, 1e-3};
  OptimizerState q = s;
  auto u = qhadam_step(q, g, c);
  const double lr = lr_at(2, c);
  for (std::size_t i = 0; i < 3; ++i) CHECK(u[i] == doctest::Approx(lr * g[i] / (std::abs(g[i]) + c.eps)).epsilon(1e-12));
}

TEST_CASE("moments stay nonnegative and updates finite") {
  Rng rng(7);
  OptimizerConfig c = config(Kind::kQHAdam, 0.01, 5);
  OptimizerState s(6);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> g(6);
    for (double& x : g) x = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(10)) - 5);
    auto u = step(s, g, c);
    for (double v : s.v) CHECK(v >= 0.0);
    for (double x : u) CHECK(std::isfinite(x));
  }
}

TEST_CASE("step errors") {
  OptimizerConfig c;
  OptimizerState s(2);
  CHECK_THROWS_AS(adam_step(s, std::vector<double>{1.0, NAN}, c), DataError);
  CHECK_THROWS_AS(adam_step(s, std::vector<double>{1.0}, c), ConfigError);
  c.beta1 = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("gradient checks") {
  for (const auto& name : problem_names()) {
    auto p = make_problem(name, 3);
    CHECK(grad_check(*p, p->start()) < 1e-6);
    Rng rng(1);
    std::vector<double> x = p->start();
    for (double& v : x) v += 0.3 * rng.normal();
    CHECK(grad_check(*p, x) < 1e-6);
  }
  auto q = make_quadratic(50, 9);
  CHECK(grad_check(*q, q->start()) < 1e-7);
  WrongGradient w;
  CHECK(grad_check(w, w.start()) > 1e-2);
  Zero z;
  CHECK(grad_check(z, z.start()) == 0.0);
}

TEST_CASE("trials are deterministic for a fixed seed") {
  auto p = make_problem("rosenbrock");
  TrialOptions opt;
  opt.steps = 500;
  opt.grad_noise = 0.1;
  opt.seed = 3;
  auto a = run_trial(*p, config(Kind::kQHAdam, 0.01, 10), opt);
  auto b = run_trial(*p, config(Kind::kQHAdam, 0.01, 10), opt);
  CHECK(a.losses == b.losses);
  opt.seed = 4;
  CHECK(run_trial(*p, config(Kind::kQHAdam, 0.01, 10), opt).losses != a.losses);
}

TEST_CASE("both optimizers converge on the quadratic") {
  auto p = make_problem("quadratic", 1);
  TrialOptions opt;
  opt.steps = 5000;
  opt.threshold = 1e-6;
  for (Kind k : {Kind::kAdam, Kind::kQHAdam}) {
    CAPTURE(to_string(k));
    auto r = run_trial(*p, config(k, 0.01, 10), opt);
    CHECK_FALSE(r.diverged);
    REQUIRE(r.steps_to_threshold.has_value());
    CHECK(*r.steps_to_threshold <= 5000);
    CHECK(r.final_loss <= 1e-6);
  }
}

TEST_CASE("both optimizers solve Rosenbrock within 50k steps") {
  auto p = make_problem("rosenbrock");
  TrialOptions opt;
  opt.steps = 50000;
  for (Kind k : {Kind::kAdam, Kind::kQHAdam}) {
    CAPTURE(to_string(k));
    auto r = run_trial(*p, config(k, 0.01, 10), opt);
    CHECK_FALSE(r.diverged);
    CHECK(r.final_loss < 1e-3);
  }
}

TEST_CASE("divergence is recorded, not thrown") {
  Exploding e;
  TrialOptions opt;
  opt.steps = 100;
  OptimizerConfig c = config(Kind::kAdam, 5.0, 1);
  auto r = run_trial(e, c, opt);
  CHECK(r.diverged);
  CHECK(r.losses.size() < 101);
}

TEST_CASE("trial reports and config JSON") {
  auto p = make_problem("sphere");
  TrialOptions opt;
  opt.steps = 1000;
  OptimizerConfig c = config(Kind::kAdam, 0.05, 10);
  auto r = run_trial(*p, c, opt);
  auto j = r.report(c, "sphere", 50);
  CHECK(j["trajectory"].size() <= 51);
  CHECK(j["trajectory"].back()["step"] == 1000);
  CHECK(j["final_loss"] == r.final_loss);
  CHECK(j["config"]["kind"] == "adam");
  auto back = OptimizerConfig::from_json(c.to_json());
  CHECK(back.lr0 == c.lr0);
  CHECK(back.kind == c.kind);
  CHECK_THROWS_AS(OptimizerConfig::from_json({{"momentum", 0.9}}), ConfigError);
  CHECK_THROWS_AS(OptimizerConfig::from_json({{"nu1", 2.0}}), ConfigError);
  CHECK_THROWS_AS(make_problem("nope"), ConfigError);
}
