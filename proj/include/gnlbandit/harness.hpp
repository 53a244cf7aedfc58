#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "gnlbandit/bandit.hpp"
#include "gnlbandit/environment.hpp"
#include "gnlbandit/errors.hpp"
#include "gnlbandit/experts.hpp"
#include "gnlbandit/model.hpp"
#include "gnlbandit/rng.hpp"

namespace gnl {

enum class Algorithm { Experts, Bandit };

inline constexpr std::uint64_t kDefaultSeed = 12345;

struct OutputOptions {
  std::string dir = "results";
  bool plot = true;
};

// Everything one experiment needs: which learner, on which environment, for
// how long, how often, and from which seed.  Repetition r draws environment
// rewards from stream (seed, r, 0) and learner samples from (seed, r, 1), so
// two algorithms run against identical environment variates.
struct ExperimentConfig {
  ExperimentConfig(GnlModel m, std::variant<BernoulliEnv, AdversarialEnv> env)
      : model(std::move(m)), environment(std::move(env)) {}

  std::string label = "custom";
  Algorithm algorithm = Algorithm::Bandit;
  RewardMode mode = RewardMode::Reward;
  SamplingStatistic statistic = SamplingStatistic::CumulativeEstimate;
  GnlModel model;
  std::variant<BernoulliEnv, AdversarialEnv> environment;
  double eta = 1.0;
  long horizon = 10000;
  int repetitions = 100;
  std::uint64_t seed = kDefaultSeed;
  double reward_bound = 1.0;
  OutputOptions output;
};

inline void validate_config(const ExperimentConfig& config) {
  if (config.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (config.repetitions < 1) throw ConfigError("repetitions must be >= 1");
  if (!(config.eta > 0.0)) throw ConfigError("eta must be positive");
  const int env_arms = std::visit(
      [](const auto& env) { return env.num_arms(); }, config.environment);
  if (env_arms != config.model.num_arms())
    throw ConfigError("model has " + std::to_string(config.model.num_arms()) +
                      " arms but the environment has " +
                      std::to_string(env_arms));
  if (const auto* adv = std::get_if<AdversarialEnv>(&config.environment)) {
    if (adv->horizon() < config.horizon)
      throw ConfigError("adversarial reward matrix has fewer rows than the "
                        "requested horizon");
    if (config.algorithm == Algorithm::Bandit) {
      for (long t = 0; t < config.horizon; ++t)
        for (double r : adv->rewards[static_cast<std::size_t>(t)]) {
          const bool ok = config.mode == RewardMode::LossOnly
                              ? (r >= -1.0 && r <= 0.0)
                              : (r >= 0.0 && r <= 1.0);
          if (!ok)
            throw ConfigError(
                "adversarial rewards fall outside the bandit reward mode's "
                "range");
        }
    }
  }
}

// Record of one repetition.  For bandit runs the per-arm play counts are
// integers and reward_sum holds the observed rewards per arm; experts runs
// observe every arm each step, so play_count carries the decision mass
// instead and full_information is set.
struct RunTrace {
  std::vector<int> arms;        // per step; -1 in experts rounds
  std::vector<double> rewards;  // per step: observed reward resp. round gain
  std::vector<double> play_count;
  std::vector<double> reward_sum;
  double total_reward = 0.0;
  bool full_information = false;

  long steps() const { return static_cast<long>(arms.size()); }
};

inline RunTrace run_single(const ExperimentConfig& config, int repetition) {
  const int n = config.model.num_arms();
  RngStream env_rng(config.seed, static_cast<std::uint64_t>(repetition), 0);
  RngStream learner_rng(config.seed, static_cast<std::uint64_t>(repetition), 1);

  RunTrace trace;
  trace.arms.reserve(static_cast<std::size_t>(config.horizon));
  trace.rewards.reserve(static_cast<std::size_t>(config.horizon));
  trace.play_count.assign(n, 0.0);
  trace.reward_sum.assign(n, 0.0);

  if (config.algorithm == Algorithm::Bandit) {
    BanditLearner learner(config.model, config.eta, config.mode,
                          config.statistic);
    for (long t = 0; t < config.horizon; ++t) {
      ArmDraw draw = learner.sample(learner_rng);
      double reward;
      if (const auto* env = std::get_if<BernoulliEnv>(&config.environment)) {
        reward = draw_reward(*env, draw.arm, env_rng);
        // the learner sees losses in loss-only mode; metrics keep the raw
        // environment reward
        learner.update(draw, config.mode == RewardMode::LossOnly
                                 ? reward - 1.0
                                 : reward);
      } else {
        const auto& adv = std::get<AdversarialEnv>(config.environment);
        reward = adv.rewards[static_cast<std::size_t>(t)]
                            [static_cast<std::size_t>(draw.arm)];
        learner.update(draw, reward);
      }
      trace.arms.push_back(draw.arm);
      trace.rewards.push_back(reward);
      trace.play_count[draw.arm] += 1.0;
      trace.reward_sum[draw.arm] += reward;
      trace.total_reward += reward;
    }
  } else {
    trace.full_information = true;
    double bound = config.reward_bound;
    if (const auto* adv = std::get_if<AdversarialEnv>(&config.environment))
      bound = adv->bound;
    ExpertsLearner learner(config.model, config.eta, bound,
                           RewardBoundPolicy::Warn);
    std::vector<double> reward(n);
    for (long t = 0; t < config.horizon; ++t) {
      if (const auto* env = std::get_if<BernoulliEnv>(&config.environment)) {
        for (int i = 0; i < n; ++i) reward[i] = draw_reward(*env, i, env_rng);
      } else {
        const auto& adv = std::get<AdversarialEnv>(config.environment);
        reward = adv.rewards[static_cast<std::size_t>(t)];
      }
      SimplexPoint decision = learner.step(reward);
      double gain = 0.0;
      for (int i = 0; i < n; ++i) gain += decision[i] * reward[i];
      trace.arms.push_back(-1);
      trace.rewards.push_back(gain);
      for (int i = 0; i < n; ++i) {
        trace.play_count[i] += decision[i];
        trace.reward_sum[i] += reward[i];
      }
      trace.total_reward += gain;
    }
  }
  return trace;
}

// Average expected regret of a completed stochastic run: best arm mean minus
// the per-step average reward.
inline double stochastic_average_regret(const RunTrace& trace,
                                        const BernoulliEnv& env) {
  return env.best_mean() -
         trace.total_reward / static_cast<double>(trace.steps());
}

// Observed per-arm success frequency; arms never played report no value.
inline std::vector<std::optional<double>> learnt_probabilities(
    const RunTrace& trace) {
  std::vector<std::optional<double>> learnt(trace.play_count.size());
  for (std::size_t i = 0; i < trace.play_count.size(); ++i) {
    const double plays = trace.full_information
                             ? static_cast<double>(trace.steps())
                             : trace.play_count[i];
    if (plays > 0.0) learnt[i] = trace.reward_sum[i] / plays;
  }
  return learnt;
}

// Logarithmically spaced checkpoints (8 per decade), always ending at T.
inline std::vector<long> regret_checkpoints(long horizon) {
  std::vector<long> points;
  double value = 1.0;
  while (true) {
    long step = static_cast<long>(std::llround(value));
    if (step >= horizon) break;
    if (points.empty() || step > points.back()) points.push_back(step);
    value *= std::pow(10.0, 1.0 / 8.0);
  }
  points.push_back(horizon);
  return points;
}

struct CheckpointStat {
  long step = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

struct ArmStat {
  double mean_play_count = 0.0;
  double stderr_play_count = 0.0;
  std::optional<double> pooled_learnt;  // all repetitions pooled
  std::optional<double> mean_learnt;    // over repetitions that played the arm
  double stderr_learnt = 0.0;
  int reps_explored = 0;
  bool explored = false;  // mean play share >= 1%
};

struct AggregateResult {
  long horizon = 0;
  int repetitions = 0;
  double mean_total_reward = 0.0;
  double stderr_total_reward = 0.0;
  std::vector<CheckpointStat> regret_curve;
  std::vector<ArmStat> arms;
  double final_avg_regret = 0.0;
};

namespace detail {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& values) {
  MeanStderr out;
  const double count = static_cast<double>(values.size());
  for (double v : values) out.mean += v;
  out.mean /= count;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_ = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  }
  return out;
}

// Per-step benchmark the regret curve measures against: the best arm mean for
// Bernoulli environments, the best prefix coordinate average for adversarial
// ones.
inline std::vector<double> best_prefix_average(const ExperimentConfig& config) {
  std::vector<long> checkpoints = regret_checkpoints(config.horizon);
  std::vector<double> best(checkpoints.size());
  if (const auto* env = std::get_if<BernoulliEnv>(&config.environment)) {
    for (std::size_t c = 0; c < checkpoints.size(); ++c)
      best[c] = env->best_mean();
    return best;
  }
  const auto& adv = std::get<AdversarialEnv>(config.environment);
  std::vector<double> sums(adv.num_arms(), 0.0);
  std::size_t next = 0;
  for (long t = 0; t < config.horizon && next < checkpoints.size(); ++t) {
    const auto& row = adv.rewards[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += row[i];
    if (t + 1 == checkpoints[next]) {
      double top = sums[0];
      for (double s : sums) top = std::max(top, s);
      best[next] = top / static_cast<double>(t + 1);
      ++next;
    }
  }
  return best;
}

}  // namespace detail

// Runs all repetitions (in parallel when threads allow) and folds the traces
// in ascending repetition order, so the result is independent of the thread
// count and bit-identical across reruns with the same seed.
inline AggregateResult run_experiment(const ExperimentConfig& config,
                                      int threads = 0) {
  validate_config(config);
  const int reps = config.repetitions;
  std::vector<RunTrace> traces(static_cast<std::size_t>(reps));

  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, reps));
  if (workers == 1) {
    for (int r = 0; r < reps; ++r) traces[r] = run_single(config, r);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      while (true) {
        int r = next.fetch_add(1);
        if (r >= reps) return;
        traces[static_cast<std::size_t>(r)] = run_single(config, r);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  const int n = config.model.num_arms();
  AggregateResult result;
  result.horizon = config.horizon;
  result.repetitions = reps;

  std::vector<double> totals(reps);
  for (int r = 0; r < reps; ++r) totals[r] = traces[r].total_reward;
  auto total_stats = detail::mean_stderr(totals);
  result.mean_total_reward = total_stats.mean;
  result.stderr_total_reward = total_stats.stderr_;

  const std::vector<long> checkpoints = regret_checkpoints(config.horizon);
  const std::vector<double> benchmark = detail::best_prefix_average(config);
  result.regret_curve.resize(checkpoints.size());
  std::vector<double> at_checkpoint(reps);
  for (std::size_t c = 0; c < checkpoints.size(); ++c) {
    for (int r = 0; r < reps; ++r) {
      double cumulative = 0.0;
      for (long t = 0; t < checkpoints[c]; ++t)
        cumulative += traces[r].rewards[static_cast<std::size_t>(t)];
      at_checkpoint[r] =
          benchmark[c] - cumulative / static_cast<double>(checkpoints[c]);
    }
    auto stats = detail::mean_stderr(at_checkpoint);
    result.regret_curve[c] = {checkpoints[c], stats.mean, stats.stderr_};
  }
  result.final_avg_regret = result.regret_curve.back().mean;

  result.arms.resize(static_cast<std::size_t>(n));
  std::vector<double> plays(reps), learnt;
  for (int i = 0; i < n; ++i) {
    ArmStat& arm = result.arms[static_cast<std::size_t>(i)];
    double pooled_rewards = 0.0, pooled_plays = 0.0;
    learnt.clear();
    for (int r = 0; r < reps; ++r) {
      const RunTrace& trace = traces[static_cast<std::size_t>(r)];
      plays[r] = trace.play_count[static_cast<std::size_t>(i)];
      pooled_rewards += trace.reward_sum[static_cast<std::size_t>(i)];
      const double denom = trace.full_information
                               ? static_cast<double>(trace.steps())
                               : plays[r];
      pooled_plays += denom;
      if (denom > 0.0)
        learnt.push_back(trace.reward_sum[static_cast<std::size_t>(i)] / denom);
    }
    auto play_stats = detail::mean_stderr(plays);
    arm.mean_play_count = play_stats.mean;
    arm.stderr_play_count = play_stats.stderr_;
    arm.reps_explored = static_cast<int>(learnt.size());
    if (pooled_plays > 0.0) arm.pooled_learnt = pooled_rewards / pooled_plays;
    if (!learnt.empty()) {
      auto learnt_stats = detail::mean_stderr(learnt);
      arm.mean_learnt = learnt_stats.mean;
      arm.stderr_learnt = learnt_stats.stderr_;
    }
    arm.explored = arm.mean_play_count >=
                   0.01 * static_cast<double>(config.horizon);
  }
  return result;
}

}  // namespace gnl
