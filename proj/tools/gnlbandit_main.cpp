// Command-line driver: run generalized-nested-logit bandit and experts
// experiments from a config file or a named preset, or run the numerical
// verification suite for a model.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 output I/O error,
// 3 verification found a failing check, 4 internal error.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "gnlbandit/config.hpp"
#include "gnlbandit/harness.hpp"
#include "gnlbandit/io.hpp"
#include "gnlbandit/verification.hpp"

namespace {

void print_presets() {
  std::printf("available presets:\n");
  for (const gnl::PresetInfo& preset : gnl::list_presets())
    std::printf("  %-18s %s\n", preset.name.c_str(),
                preset.description.c_str());
}

int run_verification(const gnl::ExperimentConfig& config,
                     const std::filesystem::path& out_dir) {
  gnl::VerificationReport report =
      gnl::run_model_verification(config.model, config.eta, config.seed);
  std::printf("verification of %s (eta=%g)\n", config.model.describe().c_str(),
              config.eta);
  std::printf("  smoothness constant        %s\n",
              gnl::format_g17(gnl::smoothness_constant(config.model,
                                                       config.eta))
                  .c_str());
  std::printf("  diff-consistency constant  %s\n",
              gnl::format_g17(gnl::diff_consistency_constant(config.model))
                  .c_str());
  std::fputs(gnl::verification_summary(report).c_str(), stdout);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  gnl::write_file_atomic(out_dir / "verification.csv",
                         gnl::verification_csv(report));
  std::printf("report written to %s\n",
              (out_dir / "verification.csv").string().c_str());
  return report.all_passed() ? 0 : 3;
}

int run_experiment_command(const gnl::ExperimentConfig& config,
                           const std::filesystem::path& out_dir,
                           int threads) {
  gnl::validate_config(config);
  gnl::AggregateResult result = gnl::run_experiment(config, threads);
  gnl::EmittedFiles files = gnl::emit_outputs(config, result, out_dir);

  std::printf("%s: mean total reward %.2f +/- %.2f, final average regret %.4f "
              "(T=%ld, B=%d, seed=%llu)\n",
              config.label.c_str(), result.mean_total_reward,
              result.stderr_total_reward, result.final_avg_regret,
              config.horizon, config.repetitions,
              static_cast<unsigned long long>(config.seed));
  for (const auto& path : files.paths)
    std::printf("  wrote %s\n", path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized-nested-logit bandit and experts simulator"};

  std::string config_path;
  std::string preset_name;
  std::string out_dir = "results";
  bool verify = false;
  bool show_presets = false;
  int threads = 0;
  std::uint64_t seed = 0;
  long horizon = 0;
  int reps = 0;

  app.add_option("--config", config_path, "experiment config file (JSON)")
      ->check(CLI::ExistingFile);
  app.add_option("--preset", preset_name,
                 "named benchmark experiment (see --list-presets)");
  app.add_flag("--list-presets", show_presets, "list the built-in presets");
  app.add_flag("--verify", verify,
               "run the numerical verification suite on the config's model");
  auto* seed_opt = app.add_option("--seed", seed, "override the seed")
                       ->envname("GNLBANDIT_SEED");
  auto* reps_opt =
      app.add_option("--reps", reps, "override the repetition count");
  auto* horizon_opt =
      app.add_option("--horizon", horizon, "override the horizon");
  app.add_option("--out", out_dir, "output directory")
      ->envname("GNLBANDIT_OUT");
  app.add_option("--threads", threads,
                 "worker threads for repetitions (0 = hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (show_presets) {
      print_presets();
      return 0;
    }
    if (config_path.empty() == preset_name.empty()) {
      std::fprintf(stderr,
                   "error: give exactly one of --config or --preset "
                   "(or --list-presets)\n");
      return 1;
    }

    gnl::ExperimentConfig config =
        config_path.empty() ? gnl::preset_config(preset_name)
                            : gnl::load_config_file(config_path);
    if (seed_opt->count() > 0) config.seed = seed;
    if (reps_opt->count() > 0) config.repetitions = reps;
    if (horizon_opt->count() > 0) config.horizon = horizon;

    std::filesystem::path out =
        out_dir != "results" || config.output.dir.empty() ? out_dir
                                                          : config.output.dir;
    if (verify) return run_verification(config, out);
    return run_experiment_command(config, out, threads);
  } catch (const gnl::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const gnl::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 4;
  }
}
