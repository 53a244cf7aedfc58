#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnlbandit/environment.hpp"
#include "gnlbandit/errors.hpp"
#include "gnlbandit/harness.hpp"
#include "gnlbandit/model.hpp"

namespace gnl {

struct PresetInfo {
  std::string name;
  std::string description;
};

// The compiled-in experiments: every preset runs the bandit for T = 10000
// over B = 100 repetitions with eta = 1, reward mode and empirical-mean
// sampling on one of the two benchmark Bernoulli environments.
inline const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> presets = {
      {"env1-mnl", "MNL mu=0.25 on the 4-arm environment"},
      {"env1-nl", "NL nests {1,3}:0.05 {2,4}:0.1 on the 4-arm environment"},
      {"env1-mnl-exploit", "MNL mu=0.05 on the 4-arm environment"},
      {"env1-nl-retuned",
       "NL nests {1,3}:0.15 {2,4}:0.2 on the 4-arm environment"},
      {"env1-nl-as-mnl",
       "NL with both nest scales 0.998 on the 4-arm environment"},
      {"env2-mnl", "MNL mu=0.25 on the 13-arm environment"},
      {"env2-nl", "NL with the 4-nest split on the 13-arm environment"},
  };
  return presets;
}

inline ExperimentConfig preset_config(const std::string& name) {
  auto experiment = [&name](GnlModel model, BernoulliEnv env) {
    ExperimentConfig config(std::move(model), std::move(env));
    config.label = name;
    config.algorithm = Algorithm::Bandit;
    config.mode = RewardMode::Reward;
    config.statistic = SamplingStatistic::EmpiricalMean;
    config.eta = 1.0;
    config.horizon = 10000;
    config.repetitions = 100;
    return config;
  };
  if (name == "env1-mnl") return experiment(make_mnl(4, 0.25), env1());
  if (name == "env1-nl")
    return experiment(
        make_nested_logit(4, {NestSpec{{0, 2}, 0.05}, NestSpec{{1, 3}, 0.1}}),
        env1());
  if (name == "env1-mnl-exploit") return experiment(make_mnl(4, 0.05), env1());
  if (name == "env1-nl-retuned")
    return experiment(
        make_nested_logit(4, {NestSpec{{0, 2}, 0.15}, NestSpec{{1, 3}, 0.2}}),
        env1());
  if (name == "env1-nl-as-mnl")
    return experiment(make_nested_logit(4, {NestSpec{{0, 2}, 0.998},
                                            NestSpec{{1, 3}, 0.998}}),
                      env1());
  if (name == "env2-mnl") return experiment(make_mnl(13, 0.25), env2());
  if (name == "env2-nl")
    return experiment(make_nested_logit(13, env2_nesting()), env2());
  throw ConfigError("unknown preset '" + name +
                    "' (see list-presets for the available names)");
}

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json& object, const std::string& path,
                                std::initializer_list<const char*> allowed) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError("unknown key '" + item.key() + "' in " + path);
  }
}

template <typename T>
T field(const json& object, const std::string& path, const char* key) {
  if (!object.contains(key))
    throw ConfigError("missing key '" + std::string(key) + "' in " + path);
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + std::string(key) + "' in " + path +
                      ": " + e.what());
  }
}

template <typename T>
T field_or(const json& object, const std::string& path, const char* key,
           T fallback) {
  if (!object.contains(key)) return fallback;
  return field<T>(object, path, key);
}

// Arm lists and share keys in config files are 1-based, matching the CSV
// output; everything internal is 0-based.
inline int parse_arm_index(int arm_1based, int num_arms,
                           const std::string& path) {
  if (arm_1based < 1 || arm_1based > num_arms)
    throw ConfigError("arm index " + std::to_string(arm_1based) + " in " +
                      path + " outside 1.." + std::to_string(num_arms));
  return arm_1based - 1;
}

inline GnlModel parse_model(const json& spec, const std::string& path) {
  if (!spec.is_object()) throw ConfigError(path + " must be an object");
  const std::string type = field<std::string>(spec, path, "type");
  try {
    if (type == "mnl") {
      reject_unknown_keys(spec, path, {"type", "arms", "mu"});
      return make_mnl(field<int>(spec, path, "arms"),
                      field<double>(spec, path, "mu"));
    }
    if (type == "nl") {
      reject_unknown_keys(spec, path, {"type", "nests"});
      const json& nests = spec.at("nests");
      if (!nests.is_array() || nests.empty())
        throw ConfigError(path + ".nests must be a nonempty array");
      int num_arms = 0;
      for (const json& nest : nests)
        num_arms += static_cast<int>(
            field<std::vector<int>>(nest, path + ".nests[]", "arms").size());
      std::vector<NestSpec> specs;
      for (std::size_t l = 0; l < nests.size(); ++l) {
        const std::string nest_path =
            path + ".nests[" + std::to_string(l + 1) + "]";
        reject_unknown_keys(nests[l], nest_path, {"arms", "mu"});
        NestSpec ns;
        ns.mu = field<double>(nests[l], nest_path, "mu");
        for (int arm : field<std::vector<int>>(nests[l], nest_path, "arms"))
          ns.arms.push_back(parse_arm_index(arm, num_arms, nest_path));
        specs.push_back(std::move(ns));
      }
      return make_nested_logit(num_arms, specs);
    }
    if (type == "gnl") {
      reject_unknown_keys(spec, path, {"type", "arms", "mu", "nests"});
      const int num_arms = field<int>(spec, path, "arms");
      const double mu = field<double>(spec, path, "mu");
      const json& nests = spec.at("nests");
      if (!nests.is_array() || nests.empty())
        throw ConfigError(path + ".nests must be a nonempty array");
      std::vector<Nest> built;
      for (std::size_t l = 0; l < nests.size(); ++l) {
        const std::string nest_path =
            path + ".nests[" + std::to_string(l + 1) + "]";
        reject_unknown_keys(nests[l], nest_path, {"mu", "shares"});
        Nest nest;
        nest.mu = field<double>(nests[l], nest_path, "mu");
        const json& shares = nests[l].at("shares");
        if (!shares.is_object())
          throw ConfigError(nest_path + ".shares must map arm -> share");
        for (const auto& item : shares.items()) {
          int arm_1based = 0;
          try {
            arm_1based = std::stoi(item.key());
          } catch (const std::exception&) {
            throw ConfigError(nest_path + ".shares key '" + item.key() +
                              "' is not an arm index");
          }
          nest.shares.emplace_back(
              parse_arm_index(arm_1based, num_arms, nest_path),
              item.value().get<double>());
        }
        built.push_back(std::move(nest));
      }
      return GnlModel(mu, num_arms, std::move(built));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    // model invariant violations keep their message, prefixed with the path
    throw ConfigError(path + ": " + e.what());
  }
  throw ConfigError(path + ".type must be one of mnl, nl, gnl");
}

inline std::variant<BernoulliEnv, AdversarialEnv> parse_environment(
    const json& spec, const std::string& path) {
  if (!spec.is_object()) throw ConfigError(path + " must be an object");
  const std::string type = field<std::string>(spec, path, "type");
  try {
    if (type == "preset") {
      reject_unknown_keys(spec, path, {"type", "name"});
      const std::string name = field<std::string>(spec, path, "name");
      if (name == "env1") return env1();
      if (name == "env2") return env2();
      throw ConfigError(path + ".name must be env1 or env2");
    }
    if (type == "bernoulli") {
      reject_unknown_keys(spec, path, {"type", "means"});
      return make_bernoulli(field<std::vector<double>>(spec, path, "means"));
    }
    if (type == "adversarial") {
      reject_unknown_keys(spec, path, {"type", "rewards", "bound"});
      return make_adversarial(
          field<std::vector<std::vector<double>>>(spec, path, "rewards"),
          field_or<double>(spec, path, "bound", 1.0));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  throw ConfigError(path + ".type must be one of preset, bernoulli, "
                    "adversarial");
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
  namespace dj = detail;
  dj::json root;
  try {
    root = dj::json::parse(text);
  } catch (const dj::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");
  dj::reject_unknown_keys(
      root, "config",
      {"label", "algorithm", "mode", "sampling", "eta", "horizon",
       "repetitions", "seed", "reward_bound", "model", "environment",
       "output"});

  if (!root.contains("model")) throw ConfigError("missing key 'model'");
  if (!root.contains("environment"))
    throw ConfigError("missing key 'environment'");

  ExperimentConfig config(
      dj::parse_model(root.at("model"), "model"),
      dj::parse_environment(root.at("environment"), "environment"));

  config.label = dj::field_or<std::string>(root, "config", "label", "custom");

  const std::string algorithm =
      dj::field_or<std::string>(root, "config", "algorithm", "bandit");
  if (algorithm == "bandit")
    config.algorithm = Algorithm::Bandit;
  else if (algorithm == "experts")
    config.algorithm = Algorithm::Experts;
  else
    throw ConfigError("algorithm must be 'bandit' or 'experts'");

  const std::string mode =
      dj::field_or<std::string>(root, "config", "mode", "reward");
  if (mode == "reward")
    config.mode = RewardMode::Reward;
  else if (mode == "loss-only")
    config.mode = RewardMode::LossOnly;
  else
    throw ConfigError("mode must be 'reward' or 'loss-only'");

  const std::string sampling =
      dj::field_or<std::string>(root, "config", "sampling", "cumulative");
  if (sampling == "cumulative")
    config.statistic = SamplingStatistic::CumulativeEstimate;
  else if (sampling == "empirical-mean")
    config.statistic = SamplingStatistic::EmpiricalMean;
  else
    throw ConfigError("sampling must be 'cumulative' or 'empirical-mean'");

  config.eta = dj::field_or<double>(root, "config", "eta", 1.0);
  config.horizon = dj::field_or<long>(root, "config", "horizon", 10000);
  config.repetitions = dj::field_or<int>(root, "config", "repetitions", 100);
  config.seed =
      dj::field_or<std::uint64_t>(root, "config", "seed", kDefaultSeed);
  config.reward_bound =
      dj::field_or<double>(root, "config", "reward_bound", 1.0);

  if (root.contains("output")) {
    const dj::json& output = root.at("output");
    dj::reject_unknown_keys(output, "output", {"dir", "plot"});
    config.output.dir =
        dj::field_or<std::string>(output, "output", "dir", "results");
    config.output.plot = dj::field_or<bool>(output, "output", "plot", true);
  }

  validate_config(config);
  return config;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace gnl
