#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rjmcmc/cli/commands.hpp"
#include "rjmcmc/io/config.hpp"

namespace {

namespace fs = std::filesystem;

fs::path output_root() {
  if (const char* root = std::getenv("RJMCMC_OUTPUT_ROOT")) return root;
  return ".";
}

fs::path resolve_out(const std::string& out) {
  const fs::path path(out);
  if (path.is_absolute()) return path;
  return output_root() / path;
}

int fail(const std::exception& e) {
  nlohmann::json error;
  error["error"] = e.what();
  std::cerr << error.dump() << std::endl;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible jump MCMC sampler over pluggable model spaces"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Sample and write trace files");
  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> replicates_override;
  std::optional<int> workers_override;
  std::optional<long> burnin_override;
  std::optional<long> thin_override;
  run->add_option("--config", config_path, "Config file (JSON)")->required();
  run->add_option("--seed", seed_override, "Override the config seed");
  run->add_option("--out", out_override, "Override the output directory");
  run->add_option("--replicates", replicates_override,
                  "Override the replicate count");
  run->add_option("--workers", workers_override, "Worker threads (0 = all)");
  run->add_option("--burnin", burnin_override, "Override burn-in iterations");
  run->add_option("--thin", thin_override, "Override thinning");

  // diagnose
  auto* diagnose =
      app.add_subcommand("diagnose", "Convergence diagnostics from traces");
  std::string diag_run_dir;
  std::string diag_out = "diagnostics";
  rjmcmc::cli::DiagnoseOptions diag_options;
  diagnose->add_option("run_dir", diag_run_dir, "Directory with trace files")
      ->required();
  diagnose->add_option("--out", diag_out, "Report directory");
  diagnose->add_option("--thin", diag_options.lag,
                       "Retain every n-th draw for the indicator tests");
  diagnose->add_option("--burnin", diag_options.burn_in,
                       "Drop states up to this iteration");
  diagnose->add_option("--checkpoints", diag_options.checkpoints,
                       "Checkpoint count");
  diagnose->add_option("--reference-points", diag_options.reference_points,
                       "Reference points for the distance diagnostic");
  diagnose->add_option("--seed", diag_options.seed,
                       "Seed for the reference-point draw");

  // estimate
  auto* estimate = app.add_subcommand(
      "estimate", "Model probabilities and Bayes factors from traces");
  std::string est_run_dir;
  std::string est_out = "estimates";
  rjmcmc::cli::EstimateOptions est_options;
  estimate->add_option("run_dir", est_run_dir, "Directory with trace files")
      ->required();
  estimate->add_option("--out", est_out, "Report directory");
  estimate->add_option("--burnin", est_options.burn_in,
                       "Drop states up to this iteration");
  estimate->add_flag("--include-burnin-attempts",
                     est_options.include_burnin_attempts,
                     "Keep burn-in attempts in the bridge estimator");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      rjmcmc::io::RunConfig config = rjmcmc::io::parse_config(config_path);
      if (seed_override) config.seed = *seed_override;
      if (!out_override.empty()) config.output_dir = out_override;
      if (replicates_override) config.replicates = *replicates_override;
      if (workers_override) config.workers = *workers_override;
      if (burnin_override) config.burn_in = *burnin_override;
      if (thin_override) config.thinning = *thin_override;
      config.output_dir =
          resolve_out(config.output_dir.empty() ? "." : config.output_dir)
              .string();
      rjmcmc::cli::run_command(config);
    } else if (diagnose->parsed()) {
      rjmcmc::cli::diagnose_command(diag_run_dir, resolve_out(diag_out),
                                    diag_options);
    } else if (estimate->parsed()) {
      rjmcmc::cli::estimate_command(est_run_dir, resolve_out(est_out),
                                    est_options);
    }
  } catch (const std::exception& e) {
    return fail(e);
  }
  return 0;
}
