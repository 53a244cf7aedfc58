#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "gnlbandit/choice.hpp"
#include "gnlbandit/model.hpp"
#include "gnlbandit/verification.hpp"

namespace gnl {

// What to do when an observed reward vector violates the configured sup-norm
// bound.  The bound only enters the regret analysis, not the update itself,
// so the default is to warn and continue.
enum class RewardBoundPolicy { Warn, Strict };

// Full-information online learner over the simplex: play the gradient of the
// perspective surplus at the cumulative reward vector, observe the full
// reward vector, accumulate.
class ExpertsLearner {
 public:
  ExpertsLearner(GnlModel model, double eta, double reward_bound = 1.0,
                 RewardBoundPolicy policy = RewardBoundPolicy::Warn)
      : model_(std::move(model)),
        eta_(eta),
        reward_bound_(reward_bound),
        policy_(policy),
        cumulative_(model_.num_arms(), 0.0) {
    if (!(eta_ > 0.0))
      throw InvalidParameterError("experts learner: eta must be positive");
    if (!(reward_bound_ > 0.0))
      throw InvalidParameterError(
          "experts learner: reward bound must be positive");
  }

  const GnlModel& model() const { return model_; }
  double eta() const { return eta_; }

  // x_t = grad Etilde(U_{t-1}; eta); uniform at U = 0 for symmetric models.
  SimplexPoint decision() const {
    return perspective_gradient(model_, cumulative_, eta_);
  }

  // Plays one round: returns the decision computed from the state before the
  // update, adds <x_t, u_t> to the cumulative gain, then absorbs u_t.
  SimplexPoint step(std::span<const double> reward) {
    check_bound(reward);
    SimplexPoint decision_now = decision();
    double gain = 0.0;
    for (int i = 0; i < model_.num_arms(); ++i)
      gain += decision_now[i] * reward[i];
    cumulative_gain_ += gain;
    for (int i = 0; i < model_.num_arms(); ++i) cumulative_[i] += reward[i];
    ++steps_;
    return decision_now;
  }

  long steps() const { return steps_; }
  double cumulative_gain() const { return cumulative_gain_; }
  const std::vector<double>& cumulative_rewards() const { return cumulative_; }
  long bound_violations() const { return bound_violations_; }

  // Best fixed expert in hindsight minus the realized gain.  The best point
  // of the simplex for a linear objective is a vertex, so the coordinate
  // maximum of the cumulative rewards suffices.
  double realized_regret() const {
    double best = 0.0;
    if (!cumulative_.empty())
      best = *std::max_element(cumulative_.begin(), cumulative_.end());
    return best - cumulative_gain_;
  }

 private:
  void check_bound(std::span<const double> reward) {
    double sup = 0.0;
    for (int i = 0; i < model_.num_arms(); ++i)
      sup = std::max(sup, std::abs(reward[i]));
    if (sup <= reward_bound_) return;
    ++bound_violations_;
    if (policy_ == RewardBoundPolicy::Strict)
      throw RewardRangeError("reward vector exceeds the configured bound " +
                             std::to_string(reward_bound_));
    if (bound_violations_ == 1)
      std::fprintf(stderr,
                   "gnlbandit: warning: reward sup-norm %g exceeds bound %g\n",
                   sup, reward_bound_);
  }

  GnlModel model_;
  double eta_;
  double reward_bound_;
  RewardBoundPolicy policy_;
  std::vector<double> cumulative_;
  double cumulative_gain_ = 0.0;
  long steps_ = 0;
  long bound_violations_ = 0;
};

// Regret of a recorded run: best coordinate sum of the reward history minus
// the realized gain.
inline double experts_regret(const std::vector<std::vector<double>>& history,
                             double gain) {
  if (history.empty())
    throw InvalidParameterError("experts_regret: empty history");
  std::vector<double> sums(history.front().size(), 0.0);
  for (const auto& reward : history)
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += reward[i];
  return *std::max_element(sums.begin(), sums.end()) - gain;
}

// Regret guarantee eta * alpha + L * K^2 * T / eta, with alpha = E(0) and L
// the smoothness constant of the unscaled surplus.
inline double theoretical_regret_bound(const GnlModel& model, double eta,
                                       double reward_bound, long horizon) {
  const std::vector<double> zeros(model.num_arms(), 0.0);
  double alpha = surplus(model, zeros);
  double smooth = smoothness_constant(model, 1.0);
  return eta * alpha +
         smooth * reward_bound * reward_bound * static_cast<double>(horizon) /
             eta;
}

// The same bound at the optimal eta: 2 * K * sqrt(alpha * L * T).
inline double optimized_regret_bound(const GnlModel& model,
                                     double reward_bound, long horizon) {
  const std::vector<double> zeros(model.num_arms(), 0.0);
  double alpha = surplus(model, zeros);
  double smooth = smoothness_constant(model, 1.0);
  return 2.0 * reward_bound *
         std::sqrt(alpha * smooth * static_cast<double>(horizon));
}

}  // namespace gnl
