#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gnlbandit/errors.hpp"
#include "gnlbandit/model.hpp"
#include "gnlbandit/rng.hpp"

namespace gnl {

// Stochastic bandit with independent Bernoulli arms.
struct BernoulliEnv {
  std::vector<double> means;

  int num_arms() const { return static_cast<int>(means.size()); }

  int best_arm() const {
    return static_cast<int>(
        std::max_element(means.begin(), means.end()) - means.begin());
  }

  double best_mean() const { return means[best_arm()]; }
};

inline BernoulliEnv make_bernoulli(std::vector<double> means) {
  if (means.empty())
    throw InvalidParameterError("bernoulli environment needs >= 1 arm");
  for (double p : means)
    if (!(p >= 0.0 && p <= 1.0))
      throw InvalidParameterError("arm mean must lie in [0, 1]");
  return BernoulliEnv{std::move(means)};
}

// The four-arm benchmark environment.
inline BernoulliEnv env1() { return make_bernoulli({0.2, 0.8, 0.87, 0.15}); }

// The thirteen-arm benchmark environment.
inline BernoulliEnv env2() {
  return make_bernoulli({0.2, 0.3, 0.87, 0.15, 0.79, 0.12, 0.85, 0.1, 0.83,
                         0.75, 0.14, 0.9, 0.2});
}

// Nested-logit nesting that goes with env2: arms 1-6, 7-8, 9-11 and 12-13
// (1-based) with scales 0.16, 0.09, 0.21 and 0.12.
inline std::vector<NestSpec> env2_nesting() {
  return {NestSpec{{0, 1, 2, 3, 4, 5}, 0.16}, NestSpec{{6, 7}, 0.09},
          NestSpec{{8, 9, 10}, 0.21}, NestSpec{{11, 12}, 0.12}};
}

// One Bernoulli draw by inverse CDF: 1 iff the next uniform variate falls
// below the arm's mean.
inline double draw_reward(const BernoulliEnv& env, int arm, RngStream& rng) {
  if (arm < 0 || arm >= env.num_arms())
    throw std::out_of_range("draw_reward: arm index out of range");
  return rng.next_uniform() < env.means[arm] ? 1.0 : 0.0;
}

// Oblivious adversary: the whole reward matrix (one row per step) is fixed
// before the run.
struct AdversarialEnv {
  std::vector<std::vector<double>> rewards;
  double bound = 1.0;

  int num_arms() const {
    return rewards.empty() ? 0 : static_cast<int>(rewards.front().size());
  }
  long horizon() const { return static_cast<long>(rewards.size()); }
};

inline AdversarialEnv make_adversarial(
    std::vector<std::vector<double>> rewards, double bound = 1.0) {
  if (rewards.empty() || rewards.front().empty())
    throw InvalidParameterError("adversarial environment needs a T x n matrix");
  if (!(bound > 0.0))
    throw InvalidParameterError("reward bound must be positive");
  const std::size_t n = rewards.front().size();
  for (const auto& row : rewards) {
    if (row.size() != n)
      throw InvalidParameterError("reward matrix rows must have equal length");
    for (double r : row)
      if (!(std::abs(r) <= bound))
        throw InvalidParameterError(
            "reward matrix entry exceeds the stated bound");
  }
  return AdversarialEnv{std::move(rewards), bound};
}

}  // namespace gnl
