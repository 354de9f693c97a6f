#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rjmcmc::io {

// Move selection and options; validity depends on the model kind (see
// validate_for_kind).
struct MoveConfig {
  bool split_merge = true;
  bool birth_death = true;
  bool calibrate_split_u1 = false;
  bool delayed_rejection = false;
  double dr_shrink = 0.5;
  bool annealed = false;
  double annealed_gamma = 2.0;
  long annealed_kappa = 5;
  double annealed_within_scale = 0.5;
  bool auto_rj = false;
  long auto_rj_pilot_iterations = 20000;
  long auto_rj_pilot_burnin = 2000;
  double auto_rj_pilot_scale = 0.5;

  bool operator==(const MoveConfig&) const = default;
};

struct MixtureOptions {
  std::optional<double> delta, xi, kappa, alpha, beta;
  int k_max = 30;
  bool operator==(const MixtureOptions&) const = default;
};

struct ArOptions {
  std::optional<double> coef_sd, noise_shape, noise_scale;
  int k_max = 10;
  bool operator==(const ArOptions&) const = default;
};

struct ChangePointOptions {
  std::optional<double> height_shape, height_rate, poisson_nu,
      position_walk_sd, height_log_walk_sd;
  int k_max = 10;
  bool operator==(const ChangePointOptions&) const = default;
};

struct ToyOptions {
  double sigma = 1.0;
  double tau = 1.0;
  bool operator==(const ToyOptions&) const = default;
};

struct RunConfig {
  std::string model_kind;  // mixture | ar | changepoint | toy
  std::string dataset;
  std::string output_dir;
  std::uint64_t seed = 0;
  long iterations = 10000;
  long burn_in = 1000;
  long thinning = 1;
  int replicates = 1;
  int workers = 0;  // 0: hardware concurrency
  double between_move_probability = 0.5;
  std::optional<int> starting_model;  // model label
  MoveConfig moves;
  MixtureOptions mixture;
  ArOptions ar;
  ChangePointOptions changepoint;
  ToyOptions toy;
  // Within-model random-walk scales keyed by model label.
  std::map<int, std::vector<double>> within_scales;

  bool operator==(const RunConfig&) const = default;
};

// Parses and validates a config file. Unknown keys are an error naming
// every offender; invariant violations name the field.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

// Field invariants and per-kind move validity; normalises mixture-only
// switches away for other kinds. parse_config applies this; callers
// building RunConfig in code get the same treatment via prepare_run.
void validate_config(RunConfig& config);

// Serialises the config with every field present, data-driven defaults
// already substituted where `resolve_*` filled them. Re-parsing the echo
// yields an identical RunConfig.
std::string config_to_json(const RunConfig& config);
void write_resolved_config(const RunConfig& config,
                           const std::filesystem::path& path);

}  // namespace rjmcmc::io
