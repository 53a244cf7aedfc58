#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnlbandit/choice.hpp"
#include "gnlbandit/model.hpp"
#include "gnlbandit/rng.hpp"

namespace gnl {

// Admissible range of observed rewards.  The regret analysis of the bandit
// algorithm is proved for losses in [-1, 0]; the stochastic experiments feed
// Bernoulli rewards in [0, 1] directly.
enum class RewardMode { LossOnly, Reward };

// Which utility statistic the sampling distribution is evaluated at.
//
// CumulativeEstimate is the algorithm as analyzed: the gradient of the
// perspective at the cumulative importance-weighted estimates, with eta fixed
// for the whole run.  EmpiricalMean instead evaluates the gradient at the
// per-arm observed mean rewards (the learnt reward probabilities); this is
// the protocol the stochastic-experiment presets follow, where it reproduces
// the published average rewards, while a fixed-eta cumulative run does not.
enum class SamplingStatistic { CumulativeEstimate, EmpiricalMean };

// One sampling event: the arm drawn and the exact distribution it was drawn
// from, so the importance-weighted estimate divides by the probability that
// was actually used.
struct ArmDraw {
  int arm = 0;
  SimplexPoint probs;
};

// Inverse-CDF draw: the first arm whose cumulative probability strictly
// exceeds the variate.  Arms with zero probability can never be selected;
// if accumulated rounding leaves the total a hair below the variate, the
// last positive-probability arm is returned.
inline int sample_arm(const SimplexPoint& probs, double variate) {
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last_positive = static_cast<int>(i);
    cumulative += probs[i];
    if (variate < cumulative && probs[i] > 0.0) return static_cast<int>(i);
  }
  return last_positive;
}

// One-hot importance-weighted estimate observed / p_arm at the drawn arm.
// Averaging over the draw recovers the full reward vector in expectation.
inline std::vector<double> importance_weighted_estimate(const ArmDraw& draw,
                                                        double observed) {
  if (!(draw.probs[draw.arm] > 0.0))
    throw std::logic_error(
        "importance_weighted_estimate: sampled arm has zero probability");
  std::vector<double> estimate(draw.probs.size(), 0.0);
  estimate[draw.arm] = observed / draw.probs[draw.arm];
  return estimate;
}

// Multiarmed bandit learner: sample one arm from the gradient of the
// perspective surplus, observe only that arm's reward, absorb the
// importance-weighted estimate.
class BanditLearner {
 public:
  BanditLearner(GnlModel model, double eta,
                RewardMode mode = RewardMode::Reward,
                SamplingStatistic statistic =
                    SamplingStatistic::CumulativeEstimate)
      : model_(std::move(model)),
        eta_(eta),
        mode_(mode),
        statistic_(statistic),
        estimates_(model_.num_arms(), 0.0),
        play_counts_(model_.num_arms(), 0),
        reward_sums_(model_.num_arms(), 0.0) {
    if (!(eta_ > 0.0))
      throw InvalidParameterError("bandit learner: eta must be positive");
  }

  const GnlModel& model() const { return model_; }
  double eta() const { return eta_; }
  RewardMode mode() const { return mode_; }
  SamplingStatistic statistic() const { return statistic_; }

  SimplexPoint sampling_distribution() const {
    if (statistic_ == SamplingStatistic::CumulativeEstimate)
      return perspective_gradient(model_, estimates_, eta_);
    return perspective_gradient(model_, empirical_means(), eta_);
  }

  // Draws an arm with a single uniform variate; every positive-probability
  // arm is reachable.
  ArmDraw sample(RngStream& rng) const {
    ArmDraw draw;
    draw.probs = sampling_distribution();
    draw.arm = sample_arm(draw.probs, rng.next_uniform());
    return draw;
  }

  // Absorbs the observed reward of the drawn arm.  In loss-only mode the
  // estimates stay in the nonpositive orthant the analysis requires.
  void update(const ArmDraw& draw, double observed) {
    check_range(observed);
    std::vector<double> estimate = importance_weighted_estimate(draw, observed);
    estimates_[draw.arm] += estimate[draw.arm];
    reward_sums_[draw.arm] += observed;
    ++play_counts_[draw.arm];
    ++steps_;
  }

  long steps() const { return steps_; }
  const std::vector<double>& cumulative_estimates() const { return estimates_; }
  const std::vector<long>& play_counts() const { return play_counts_; }
  const std::vector<double>& reward_sums() const { return reward_sums_; }

  // Observed mean reward per arm; arms never played report zero.
  std::vector<double> empirical_means() const {
    std::vector<double> means(model_.num_arms(), 0.0);
    for (int i = 0; i < model_.num_arms(); ++i)
      if (play_counts_[i] > 0)
        means[i] = reward_sums_[i] / static_cast<double>(play_counts_[i]);
    return means;
  }

 private:
  void check_range(double observed) const {
    const bool ok = mode_ == RewardMode::LossOnly
                        ? (observed >= -1.0 && observed <= 0.0)
                        : (observed >= 0.0 && observed <= 1.0);
    if (!ok)
      throw RewardRangeError(
          std::string("observed reward ") + std::to_string(observed) +
          (mode_ == RewardMode::LossOnly ? " outside [-1, 0]"
                                         : " outside [0, 1]"));
  }

  GnlModel model_;
  double eta_;
  RewardMode mode_;
  SamplingStatistic statistic_;
  std::vector<double> estimates_;
  std::vector<long> play_counts_;
  std::vector<double> reward_sums_;
  long steps_ = 0;
};

// Expected-regret guarantee for the loss-only bandit:
// eta * E(0) + n * T / (min_l mu_l * eta).
inline double expected_regret_bound(const GnlModel& model, double eta,
                                    long horizon) {
  if (!(eta > 0.0))
    throw InvalidParameterError("expected_regret_bound: eta must be positive");
  const std::vector<double> zeros(model.num_arms(), 0.0);
  return eta * surplus(model, zeros) +
         static_cast<double>(model.num_arms()) *
             static_cast<double>(horizon) / (model.min_nest_mu() * eta);
}

}  // namespace gnl
