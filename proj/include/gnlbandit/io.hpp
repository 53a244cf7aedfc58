#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "gnlbandit/errors.hpp"
#include "gnlbandit/harness.hpp"
#include "gnlbandit/verification.hpp"

namespace gnl {

// 17 significant digits round-trip a double exactly, so reruns with the same
// seed produce byte-identical files.
inline std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline std::string format_optional(const std::optional<double>& value) {
  return value ? format_g17(*value) : "na";
}

// Writes via a temporary in the target directory plus rename, so a failed
// write never leaves a partial file behind.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& content) {
  namespace fs = std::filesystem;
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw IoError("failed moving '" + tmp.string() + "' into place: " +
                  ec.message());
  }
}

inline std::string algorithm_name(Algorithm algorithm) {
  return algorithm == Algorithm::Bandit ? "bandit" : "experts";
}

inline std::string mode_name(RewardMode mode) {
  return mode == RewardMode::Reward ? "reward" : "loss-only";
}

inline std::string statistic_name(SamplingStatistic statistic) {
  return statistic == SamplingStatistic::CumulativeEstimate ? "cumulative"
                                                            : "empirical-mean";
}

inline std::string environment_name(
    const std::variant<BernoulliEnv, AdversarialEnv>& environment) {
  if (const auto* env = std::get_if<BernoulliEnv>(&environment)) {
    std::string out = "bernoulli(";
    char buf[32];
    for (std::size_t i = 0; i < env->means.size(); ++i) {
      if (i > 0) out += " ";
      std::snprintf(buf, sizeof(buf), "%g", env->means[i]);
      out += buf;
    }
    return out + ")";
  }
  const auto& adv = std::get<AdversarialEnv>(environment);
  return "adversarial(" + std::to_string(adv.horizon()) + "x" +
         std::to_string(adv.num_arms()) + ")";
}

inline std::string summary_csv(const ExperimentConfig& config,
                               const AggregateResult& result) {
  std::string out =
      "label,algorithm,model,environment,mode,sampling,eta,horizon,"
      "repetitions,seed,mean_total_reward,stderr_total_reward,"
      "final_avg_regret\n";
  out += config.label + "," + algorithm_name(config.algorithm) + ",\"" +
         config.model.describe() + "\",\"" +
         environment_name(config.environment) + "\"," +
         mode_name(config.mode) + "," + statistic_name(config.statistic) +
         "," + format_g17(config.eta) + "," + std::to_string(config.horizon) +
         "," + std::to_string(config.repetitions) + "," +
         std::to_string(config.seed) + "," +
         format_g17(result.mean_total_reward) + "," +
         format_g17(result.stderr_total_reward) + "," +
         format_g17(result.final_avg_regret) + "\n";
  return out;
}

inline std::string trace_csv(const AggregateResult& result) {
  std::string out = "step,mean_avg_regret,stderr\n";
  for (const CheckpointStat& point : result.regret_curve)
    out += std::to_string(point.step) + "," + format_g17(point.mean) + "," +
           format_g17(point.stderr_) + "\n";
  return out;
}

// One row per arm (1-based ids); learnt_probability pools the observations of
// all repetitions and stays "na" for arms never played anywhere.
inline std::string arms_csv(const AggregateResult& result) {
  std::string out = "arm,mean_play_count,learnt_probability,explored_flag\n";
  for (std::size_t i = 0; i < result.arms.size(); ++i) {
    const ArmStat& arm = result.arms[i];
    out += std::to_string(i + 1) + "," + format_g17(arm.mean_play_count) +
           "," + format_optional(arm.pooled_learnt) + "," +
           (arm.explored ? "1" : "0") + "\n";
  }
  return out;
}

// Minimal standalone SVG of the mean average-regret curve.
inline std::string regret_plot_svg(const ExperimentConfig& config,
                                   const AggregateResult& result) {
  constexpr double kWidth = 720.0, kHeight = 480.0;
  constexpr double kLeft = 70.0, kRight = 690.0, kTop = 50.0, kBottom = 430.0;
  double max_regret = 0.0;
  for (const CheckpointStat& p : result.regret_curve)
    max_regret = std::max(max_regret, p.mean);
  if (max_regret <= 0.0) max_regret = 1.0;
  const double y_top = 1.05 * max_regret;
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  auto x_of = [&](double step) {
    return kLeft + (kRight - kLeft) * step /
                       static_cast<double>(result.horizon);
  };
  auto y_of = [&](double regret) {
    return kBottom - (kBottom - kTop) * regret / y_top;
  };

  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
      "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " +
      fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"360\" y=\"28\" text-anchor=\"middle\" font-family=\""
         "sans-serif\" font-size=\"16\">average expected regret: " +
         config.label + "</text>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kBottom) + "\" x2=\"" +
         fmt(kRight) + "\" y2=\"" + fmt(kBottom) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" +
         fmt(kLeft) + "\" y2=\"" + fmt(kBottom) + "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 5; ++tick) {
    const double step = result.horizon * tick / 5.0;
    const double regret = y_top * tick / 5.0;
    svg += "<text x=\"" + fmt(x_of(step)) + "\" y=\"" + fmt(kBottom + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size="
           "\"11\">" + fmt(step) + "</text>\n";
    svg += "<text x=\"" + fmt(kLeft - 8.0) + "\" y=\"" +
           fmt(y_of(regret) + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size="
           "\"11\">" + fmt(regret) + "</text>\n";
  }
  svg += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" "
         "points=\"";
  for (const CheckpointStat& p : result.regret_curve)
    svg += fmt(x_of(static_cast<double>(p.step))) + "," + fmt(y_of(p.mean)) +
           " ";
  svg += "\"/>\n</svg>\n";
  return svg;
}

inline std::string verification_csv(const VerificationReport& report) {
  std::string out = "check,model,samples,worst_margin,passed\n";
  for (const CheckResult& entry : report.entries) {
    out += entry.name + ",\"" + entry.model + "\",\"" + entry.samples +
           "\"," + format_g17(entry.worst_margin) + ",";
    out += entry.applicable ? (entry.passed ? "1" : "0") : "na";
    out += "\n";
  }
  return out;
}

inline std::string verification_summary(const VerificationReport& report) {
  std::string out;
  for (const CheckResult& entry : report.entries) {
    const char* status = !entry.applicable ? " n/a"
                         : entry.passed    ? "pass"
                                           : "FAIL";
    char line[512];
    std::snprintf(line, sizeof(line), "[%s] %-26s worst margin %12.5g  (%s)\n",
                  status, entry.name.c_str(), entry.worst_margin,
                  entry.samples.c_str());
    out += line;
  }
  return out;
}

struct EmittedFiles {
  std::vector<std::filesystem::path> paths;
};

// Serializes every output first, then writes file by file; if anything
// fails, files written so far are removed again.
inline EmittedFiles emit_outputs(const ExperimentConfig& config,
                                 const AggregateResult& result,
                                 const std::filesystem::path& out_dir) {
  namespace fs = std::filesystem;
  std::vector<std::pair<fs::path, std::string>> files;
  files.emplace_back(out_dir / "summary.csv", summary_csv(config, result));
  files.emplace_back(out_dir / "trace.csv", trace_csv(result));
  files.emplace_back(out_dir / "arms.csv", arms_csv(result));
  if (config.output.plot)
    files.emplace_back(out_dir / "regret.svg",
                       regret_plot_svg(config, result));

  std::error_code ec;
  fs::create_directories(out_dir, ec);

  EmittedFiles emitted;
  try {
    for (const auto& [path, content] : files) {
      write_file_atomic(path, content);
      emitted.paths.push_back(path);
    }
  } catch (...) {
    for (const fs::path& path : emitted.paths) {
      std::error_code ignore;
      fs::remove(path, ignore);
    }
    throw;
  }
  return emitted;
}

}  // namespace gnl
