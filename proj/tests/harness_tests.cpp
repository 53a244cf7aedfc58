#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gnlbandit/config.hpp"
#include "gnlbandit/harness.hpp"

using namespace gnl;

namespace {

ExperimentConfig small_bandit_config() {
  ExperimentConfig config(make_mnl(4, 0.25), env1());
  config.algorithm = Algorithm::Bandit;
  config.statistic = SamplingStatistic::EmpiricalMean;
  config.horizon = 500;
  config.repetitions = 3;
  config.seed = 71;
  return config;
}

}  // namespace

TEST_CASE("config validation catches inconsistencies") {
  ExperimentConfig mismatch(make_mnl(3, 0.25), env1());
  REQUIRE_THROWS_AS(validate_config(mismatch), ConfigError);

  ExperimentConfig bad_horizon = small_bandit_config();
  bad_horizon.horizon = 0;
  REQUIRE_THROWS_AS(validate_config(bad_horizon), ConfigError);

  ExperimentConfig bad_reps = small_bandit_config();
  bad_reps.repetitions = 0;
  REQUIRE_THROWS_AS(validate_config(bad_reps), ConfigError);

  // adversarial matrix shorter than the horizon
  ExperimentConfig short_matrix(make_mnl(2, 1.0),
                                make_adversarial({{0.5, 0.25}}, 1.0));
  short_matrix.horizon = 5;
  REQUIRE_THROWS_AS(validate_config(short_matrix), ConfigError);

  // bandit reward mode cannot digest negative adversarial rewards
  ExperimentConfig bad_range(make_mnl(2, 1.0),
                             make_adversarial({{0.5, -0.25}}, 1.0));
  bad_range.horizon = 1;
  bad_range.algorithm = Algorithm::Bandit;
  bad_range.mode = RewardMode::Reward;
  REQUIRE_THROWS_AS(validate_config(bad_range), ConfigError);
  bad_range.algorithm = Algorithm::Experts;
  REQUIRE_NOTHROW(validate_config(bad_range));
}

TEST_CASE("one-step one-repetition run") {
  ExperimentConfig config = small_bandit_config();
  config.horizon = 1;
  config.repetitions = 1;
  AggregateResult result = run_experiment(config);
  REQUIRE((result.mean_total_reward == 0.0 || result.mean_total_reward == 1.0));
  double plays = 0.0;
  int played_arms = 0;
  for (const ArmStat& arm : result.arms) {
    plays += arm.mean_play_count;
    played_arms += arm.mean_play_count > 0.0;
  }
  REQUIRE(plays == 1.0);
  REQUIRE(played_arms == 1);
}

TEST_CASE("per-repetition conservation") {
  ExperimentConfig config = small_bandit_config();
  for (int rep = 0; rep < config.repetitions; ++rep) {
    RunTrace trace = run_single(config, rep);
    double plays = 0.0, rewards = 0.0;
    for (int i = 0; i < 4; ++i) {
      plays += trace.play_count[i];
      rewards += trace.reward_sum[i];
      REQUIRE(trace.play_count[i] ==
              std::floor(trace.play_count[i]));  // integral for bandits
    }
    REQUIRE(plays == static_cast<double>(config.horizon));
    REQUIRE(rewards == trace.total_reward);  // 0/1 rewards sum exactly
  }
}

TEST_CASE("runs are reproducible and thread-count independent") {
  ExperimentConfig config = small_bandit_config();
  config.repetitions = 6;
  AggregateResult one = run_experiment(config, 1);
  AggregateResult two = run_experiment(config, 2);
  AggregateResult redo = run_experiment(config, 2);
  REQUIRE(one.mean_total_reward == two.mean_total_reward);
  REQUIRE(one.stderr_total_reward == two.stderr_total_reward);
  REQUIRE(two.mean_total_reward == redo.mean_total_reward);
  REQUIRE(one.regret_curve.size() == two.regret_curve.size());
  for (std::size_t c = 0; c < one.regret_curve.size(); ++c) {
    REQUIRE(one.regret_curve[c].mean == two.regret_curve[c].mean);
    REQUIRE(one.regret_curve[c].stderr_ == two.regret_curve[c].stderr_);
  }
  for (std::size_t i = 0; i < one.arms.size(); ++i) {
    REQUIRE(one.arms[i].mean_play_count == two.arms[i].mean_play_count);
    REQUIRE(one.arms[i].pooled_learnt == two.arms[i].pooled_learnt);
  }
}

TEST_CASE("stochastic average regret definition") {
  BernoulliEnv env = env1();
  RunTrace uniform_play;
  uniform_play.arms.assign(1000, 0);
  uniform_play.rewards.assign(1000, 0.0);
  uniform_play.play_count = {250.0, 250.0, 250.0, 250.0};
  uniform_play.reward_sum = {250.0 * 0.2, 250.0 * 0.8, 250.0 * 0.87,
                             250.0 * 0.15};
  uniform_play.total_reward = 250.0 * (0.2 + 0.8 + 0.87 + 0.15);
  REQUIRE(stochastic_average_regret(uniform_play, env) ==
          Catch::Approx(0.87 - 0.505).margin(1e-12));

  RunTrace oracle_play = uniform_play;
  oracle_play.total_reward = 1000.0 * 0.87;
  REQUIRE(stochastic_average_regret(oracle_play, env) ==
          Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("learnt probabilities flag unexplored arms") {
  RunTrace trace;
  trace.arms.assign(1500, 0);
  trace.rewards.assign(1500, 0.0);
  trace.play_count = {1000.0, 500.0, 0.0};
  trace.reward_sum = {870.0, 100.0, 0.0};
  trace.total_reward = 970.0;
  auto learnt = learnt_probabilities(trace);
  REQUIRE(learnt[0].has_value());
  REQUIRE(*learnt[0] == Catch::Approx(0.87));
  REQUIRE(*learnt[1] == Catch::Approx(0.2));
  REQUIRE(learnt[2].has_value() == false);

  trace.full_information = true;
  auto full = learnt_probabilities(trace);
  REQUIRE(*full[2] == 0.0);  // observed at every step under full information
}

TEST_CASE("regret checkpoints are increasing and end at the horizon") {
  for (long horizon : {1L, 10L, 999L, 10000L}) {
    std::vector<long> points = regret_checkpoints(horizon);
    REQUIRE(points.front() >= 1);
    REQUIRE(points.back() == horizon);
    for (std::size_t i = 1; i < points.size(); ++i)
      REQUIRE(points[i] > points[i - 1]);
  }
  REQUIRE(regret_checkpoints(10000).size() > 20);
}

TEST_CASE("average regret decays on the benchmark environment") {
  ExperimentConfig config = preset_config("env1-mnl");
  config.repetitions = 10;
  AggregateResult result = run_experiment(config);
  double at_1000 = 0.0, at_end = result.regret_curve.back().mean;
  for (const CheckpointStat& point : result.regret_curve)
    if (point.step == 1000) at_1000 = point.mean;
  REQUIRE(at_1000 > 0.0);
  REQUIRE(at_end < at_1000);
}

TEST_CASE("pooled learnt probabilities approach the arm means under mnl mu=1") {
  ExperimentConfig config(make_mnl(4, 1.0), env1());
  config.statistic = SamplingStatistic::EmpiricalMean;
  config.horizon = 10000;
  config.repetitions = 20;
  config.seed = 72;
  AggregateResult result = run_experiment(config);
  BernoulliEnv env = env1();
  for (int i = 0; i < 4; ++i) {
    REQUIRE(result.arms[i].pooled_learnt.has_value());
    REQUIRE(std::abs(*result.arms[i].pooled_learnt - env.means[i]) < 0.05);
    REQUIRE(result.arms[i].explored);
  }
}

TEST_CASE("experts runs against both environment kinds") {
  ExperimentConfig stochastic(make_mnl(4, 0.25), env1());
  stochastic.algorithm = Algorithm::Experts;
  stochastic.horizon = 200;
  stochastic.repetitions = 2;
  AggregateResult result = run_experiment(stochastic);
  REQUIRE(result.mean_total_reward > 0.0);
  REQUIRE(std::isfinite(result.final_avg_regret));

  std::vector<std::vector<double>> rewards(50, {0.1, 0.9});
  ExperimentConfig adversarial(make_mnl(2, 1.0),
                               make_adversarial(rewards, 1.0));
  adversarial.algorithm = Algorithm::Experts;
  adversarial.horizon = 50;
  adversarial.repetitions = 1;
  AggregateResult fixed = run_experiment(adversarial);
  // the learner drifts toward arm 2, so regret stays below the 0.8 gap
  REQUIRE(fixed.final_avg_regret < 0.8);
  REQUIRE(fixed.final_avg_regret >= 0.0);
}

TEST_CASE("bandit on an adversarial matrix") {
  std::vector<std::vector<double>> rewards(100, {0.2, 0.7});
  ExperimentConfig config(make_mnl(2, 0.5), make_adversarial(rewards, 1.0));
  config.algorithm = Algorithm::Bandit;
  config.mode = RewardMode::Reward;
  config.horizon = 100;
  config.repetitions = 3;
  AggregateResult result = run_experiment(config);
  REQUIRE(result.mean_total_reward > 0.0);
  REQUIRE(result.mean_total_reward <= 70.0);
}
