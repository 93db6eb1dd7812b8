#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "grp/error.hpp"
#include "grp/objective.hpp"
#include "support/generators.hpp"

using namespace grp;

namespace {

constexpr double kTol = 1e-12;

std::vector<double> random_logps(grptest::Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = -grptest::unit(rng) * 6.0;
  return v;
}

ObjectiveResult single_token(double logp_new, double logp_old, double adv, double beta = 0.0) {
  const std::vector<SequenceLogProbs> g{{{logp_new}, {logp_old}, {logp_new}, adv}};
  return grpo_objective(g, {0.2, beta});
}

}  // namespace

TEST_CASE("identical policies give the mean advantage") {
  grptest::Rng rng(21);
  for (int i = 0; i < 200; ++i) {
    std::vector<SequenceLogProbs> g;
    double sum = 0.0;
    const std::size_t n = grptest::pick(rng, 1, 8);
    for (std::size_t k = 0; k < n; ++k) {
      const auto lp = random_logps(rng, grptest::pick(rng, 1, 20));
      const double a = grptest::unit(rng) * 4 - 2;
      g.push_back({lp, lp, lp, a});
      sum += a;
    }
    const auto r = grpo_objective(g, {0.2, 0.04});
    CHECK(std::abs(r.objective - sum / static_cast<double>(n)) <= kTol);
    CHECK(r.kl_mean == 0.0);
  }
}

TEST_CASE("clip examples") {
  const double half = -std::log(2.0);
  // ratio 2 with positive advantage is capped at 1 + epsilon.
  CHECK(std::abs(single_token(0.0, half, 1.0).objective - 1.2) <= kTol);
  // With a negative advantage the unclipped, lower value wins.
  CHECK(std::abs(single_token(0.0, half, -1.0).objective - (-2.0)) <= kTol);
  const auto r = single_token(0.0, half, 1.0);
  CHECK(std::abs(r.sequences[0].tokens[0].ratio - 2.0) <= kTol);
  CHECK(std::abs(r.sequences[0].tokens[0].clipped_ratio - 1.2) <= kTol);
}

TEST_CASE("kl estimator") {
  const std::vector<double> a{-1.0, -2.0, -0.5};
  for (double v : kl_estimate(a, a)) CHECK(v == 0.0);

  const std::vector<double> lp_new{-std::log(2.0) * 2};
  const std::vector<double> lp_ref{-std::log(2.0)};
  CHECK(std::abs(kl_estimate(lp_new, lp_ref)[0] - (1.0 - std::log(2.0))) <= kTol);
  CHECK(std::abs(kl_estimate(lp_new, lp_ref)[0] - 0.3069) <= 1e-4);

  CHECK_THROWS_AS(kl_estimate(a, lp_ref), Error);

  grptest::Rng rng(22);
  for (int i = 0; i < 1000; ++i) {
    const auto x = random_logps(rng, 16);
    auto y = random_logps(rng, 16);
    y[3] = x[3];
    const auto k = kl_estimate(x, y);
    for (std::size_t t = 0; t < k.size(); ++t) {
      CHECK(k[t] >= 0.0);
      if (x[t] != y[t]) CHECK(k[t] > 0.0);
    }
    CHECK(k[3] == 0.0);
  }
}

TEST_CASE("inside the clip range the objective is the plain ratio mean") {
  grptest::Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = grptest::pick(rng, 1, 10);
    const auto old_lp = random_logps(rng, n);
    std::vector<double> new_lp(n);
    std::vector<double> adv(n);
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      new_lp[t] = std::min(0.0, old_lp[t] + (grptest::unit(rng) - 0.5) * 0.3);
      adv[t] = grptest::unit(rng) * 2 - 1;
      sum += std::exp(new_lp[t] - old_lp[t]) * adv[t];
    }
    const std::vector<SequenceLogProbs> g{{new_lp, old_lp, old_lp, adv}};
    CHECK(std::abs(grpo_objective(g, {0.2, 0.0}).objective - sum / n) <= kTol);
  }
}

TEST_CASE("surrogate bounds and permutation invariance") {
  grptest::Rng rng(24);
  const ObjectiveConfig cfg{0.2, 0.04};
  for (int i = 0; i < 300; ++i) {
    std::vector<SequenceLogProbs> g;
    for (std::size_t k = 0, n = grptest::pick(rng, 1, 6); k < n; ++k) {
      const std::size_t len = grptest::pick(rng, 1, 12);
      g.push_back({random_logps(rng, len), random_logps(rng, len), random_logps(rng, len),
                   grptest::unit(rng) * 4 - 2});
    }
    const auto r = grpo_objective(g, cfg);
    for (const auto& s : r.sequences) {
      for (const auto& t : s.tokens) {
        if (t.advantage > 0) CHECK(t.surrogate <= (1 + cfg.epsilon) * t.advantage + kTol);
        if (t.advantage < 0) CHECK(t.surrogate <= t.ratio * t.advantage + kTol);
        CHECK(t.kl >= 0.0);
      }
    }
    std::reverse(g.begin(), g.end());
    CHECK(std::abs(grpo_objective(g, cfg).objective - r.objective) <= 1e-12);
  }
}

TEST_CASE("per-token advantages and KL penalty") {
  const std::vector<SequenceLogProbs> g{
      {{-1.0, -1.0}, {-1.0, -1.0}, {-1.0 + std::log(2.0), -1.0}, std::vector<double>{1.0, 3.0}}};
  const auto r = grpo_objective(g, {0.2, 0.5});
  const double kl0 = 1.0 - std::log(2.0);
  CHECK(std::abs(r.sequences[0].tokens[0].kl - kl0) <= kTol);
  CHECK(std::abs(r.surrogate_mean - 2.0) <= kTol);
  CHECK(std::abs(r.kl_mean - kl0 / 2) <= kTol);
  CHECK(std::abs(r.objective - (2.0 - 0.5 * kl0 / 2)) <= kTol);
}

TEST_CASE("objective input validation") {
  const std::vector<SequenceLogProbs> ok{{{-1.0}, {-1.0}, {-1.0}, 1.0}};
  CHECK_THROWS_AS(grpo_objective({}, {}), Error);
  CHECK_THROWS_AS(grpo_objective(ok, {0.0, 0.1}), Error);
  CHECK_THROWS_AS(grpo_objective(ok, {0.2, -0.1}), Error);
  const std::vector<SequenceLogProbs> mismatch{{{-1.0, -2.0}, {-1.0}, {-1.0}, 1.0}};
  CHECK_THROWS_AS(grpo_objective(mismatch, {}), Error);
  const std::vector<SequenceLogProbs> positive{{{0.5}, {-1.0}, {-1.0}, 1.0}};
  CHECK_THROWS_AS(grpo_objective(positive, {}), Error);
  const std::vector<SequenceLogProbs> bad_adv{{{-1.0}, {-1.0}, {-1.0}, std::vector<double>{1, 2}}};
  CHECK_THROWS_AS(grpo_objective(bad_adv, {}), Error);
  const std::vector<SequenceLogProbs> empty{{{}, {}, {}, 1.0}};
  CHECK_THROWS_AS(grpo_objective(empty, {}), Error);
}
