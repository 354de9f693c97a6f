#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "rjmcmc/io/config.hpp"
#include "rjmcmc/io/trace_io.hpp"
#include "rjmcmc/problems.hpp"
#include "rjmcmc/sampler.hpp"

namespace rjmcmc::cli {

// Fully assembled run: resolved config (all data-driven defaults filled),
// model space, move set, optional between-model kernel and the sampler
// settings derived from the config.
struct PreparedRun {
  io::RunConfig resolved;
  Problem problem;
  SamplerConfig sampler;
  BetweenKernel kernel;  // empty: plain reversible jump step
  io::ParamNamer namer;
};

// Loads the dataset, fills data-driven defaults and builds the model
// space and moves. Auto-RJ pilot chains run here (seeded from the config
// seed) so the whole run stays reproducible.
PreparedRun prepare_run(const io::RunConfig& config);

// run: trace CSVs (three files per replicate) plus resolved_config.json
// under the output directory.
void run_command(const io::RunConfig& config);

struct DiagnoseOptions {
  int lag = 1;
  long burn_in = 0;        // drop recorded states up to this iteration
  int checkpoints = 20;
  int reference_points = 100;
  std::uint64_t seed = 0;  // reference-point draw
};

// diagnose: JSON report plus one plot-ready CSV per statistic family.
// Requires at least two replicates for the between-chain statistics; a
// single replicate produces a warning report with within-chain summaries
// only.
void diagnose_command(const std::filesystem::path& run_dir,
                      const std::filesystem::path& out_dir,
                      const DiagnoseOptions& options);

struct EstimateOptions {
  long burn_in = 0;
  bool include_burnin_attempts = false;
};

// estimate: JSON report with model probabilities and the Bayes factor
// table (visit and bridge estimators) for each directly connected pair.
void estimate_command(const std::filesystem::path& run_dir,
                      const std::filesystem::path& out_dir,
                      const EstimateOptions& options);

}  // namespace rjmcmc::cli
