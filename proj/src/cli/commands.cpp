#include "rjmcmc/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "rjmcmc/diagnostics.hpp"
#include "rjmcmc/estimation.hpp"
#include "rjmcmc/models/ar.hpp"
#include "rjmcmc/models/changepoint.hpp"
#include "rjmcmc/models/mixture.hpp"
#include "rjmcmc/models/toy.hpp"
#include "rjmcmc/moves/annealed.hpp"
#include "rjmcmc/moves/autorj.hpp"
#include "rjmcmc/moves/delayed_rejection.hpp"
#include "rjmcmc/stats.hpp"

namespace rjmcmc::cli {

using nlohmann::json;

namespace {

std::shared_ptr<const std::vector<double>> load_values(
    const std::string& dataset) {
  if (!std::filesystem::exists(dataset))
    throw std::invalid_argument("dataset does not exist: " + dataset);
  return std::make_shared<const std::vector<double>>(
      io::read_values_file(dataset));
}

void attach_wrappers(PreparedRun& run, const io::MoveConfig& moves) {
  if (moves.delayed_rejection)
    run.kernel = rjmcmc::moves::make_delayed_rejection_kernel(moves.dr_shrink);
  if (moves.annealed) {
    rjmcmc::moves::AnnealedOptions options;
    options.gamma = moves.annealed_gamma;
    options.kappa = moves.annealed_kappa;
    options.within_scale = moves.annealed_within_scale;
    run.kernel = rjmcmc::moves::make_annealed_kernel(options);
  }
}

// Replaces the problem's move set by auto-rj jumps with pilot moments,
// one per jump-graph edge.
void attach_auto_rj(PreparedRun& run, const io::MoveConfig& moves,
                    std::uint64_t seed) {
  auto replaced = std::make_unique<MoveSet>();
  std::set<std::pair<int, int>> done;
  std::vector<rjmcmc::moves::ModelMoments> moments(
      static_cast<std::size_t>(run.problem.space->size()));
  for (int i = 0; i < run.problem.space->size(); ++i) {
    Rng pilot_rng(seed, 1000 + static_cast<std::uint64_t>(i));
    moments[static_cast<std::size_t>(i)] = rjmcmc::moves::estimate_moments_pilot(
        *run.problem.space, i, moves.auto_rj_pilot_iterations,
        moves.auto_rj_pilot_burnin, moves.auto_rj_pilot_scale, pilot_rng);
  }
  for (int i = 0; i < run.problem.space->size(); ++i) {
    for (const auto& edge : run.problem.space->jumps_from(i)) {
      if (edge.target == i) continue;
      const auto key = std::minmax(i, edge.target);
      if (!done.insert(key).second) continue;
      replaced->add(std::make_unique<rjmcmc::moves::AutoRjMove>(
          key.first, key.second, moments[static_cast<std::size_t>(key.first)],
          moments[static_cast<std::size_t>(key.second)]));
    }
  }
  run.problem.moves = std::move(replaced);
}

}  // namespace

PreparedRun prepare_run(const io::RunConfig& config) {
  PreparedRun run;
  run.resolved = config;
  io::validate_config(run.resolved);
  run.namer = io::generic_param_namer();

  if (config.model_kind == "mixture") {
    auto data = load_values(config.dataset);
    auto hyper = models::MixtureHyperParams::defaults_for(*data);
    hyper.k_max = config.mixture.k_max;
    auto& opt = run.resolved.mixture;
    if (opt.delta) hyper.delta = *opt.delta;
    if (opt.xi) hyper.xi = *opt.xi;
    if (opt.kappa) hyper.kappa = *opt.kappa;
    if (opt.alpha) hyper.alpha = *opt.alpha;
    if (opt.beta) hyper.beta = *opt.beta;
    opt.delta = hyper.delta;
    opt.xi = hyper.xi;
    opt.kappa = hyper.kappa;
    opt.alpha = hyper.alpha;
    opt.beta = hyper.beta;
    MixtureMoveOptions move_options;
    move_options.split_merge = run.resolved.moves.split_merge;
    move_options.birth_death = run.resolved.moves.birth_death;
    move_options.calibrate_split_u1 = run.resolved.moves.calibrate_split_u1;
    run.problem = make_mixture_problem(data, hyper, hyper.k_max, move_options);
    run.namer = io::mixture_param_namer();
  } else if (config.model_kind == "ar") {
    auto data = load_values(config.dataset);
    auto hyper = models::ArHyperParams::defaults_for(*data);
    hyper.k_max = config.ar.k_max;
    auto& opt = run.resolved.ar;
    if (opt.coef_sd) hyper.coef_sd = *opt.coef_sd;
    if (opt.noise_shape) hyper.noise_shape = *opt.noise_shape;
    if (opt.noise_scale) hyper.noise_scale = *opt.noise_scale;
    opt.coef_sd = hyper.coef_sd;
    opt.noise_shape = hyper.noise_shape;
    opt.noise_scale = hyper.noise_scale;
    run.problem = models::make_ar_problem(data, hyper);
    run.namer = io::ar_param_namer();
  } else if (config.model_kind == "changepoint") {
    if (!std::filesystem::exists(config.dataset))
      throw std::invalid_argument("dataset does not exist: " + config.dataset);
    const auto events = io::read_event_file(config.dataset);
    auto shared =
        std::make_shared<const std::vector<double>>(events.events);
    auto hyper = models::ChangePointHyperParams::defaults_for(
        *shared, events.horizon);
    hyper.k_max = config.changepoint.k_max;
    auto& opt = run.resolved.changepoint;
    if (opt.height_shape) hyper.height_shape = *opt.height_shape;
    if (opt.height_rate) hyper.height_rate = *opt.height_rate;
    if (opt.poisson_nu) hyper.poisson_nu = *opt.poisson_nu;
    if (opt.position_walk_sd) hyper.position_walk_sd = *opt.position_walk_sd;
    if (opt.height_log_walk_sd)
      hyper.height_log_walk_sd = *opt.height_log_walk_sd;
    opt.height_shape = hyper.height_shape;
    opt.height_rate = hyper.height_rate;
    opt.poisson_nu = hyper.poisson_nu;
    opt.position_walk_sd = hyper.position_walk_sd;
    opt.height_log_walk_sd = hyper.height_log_walk_sd;
    run.problem = make_changepoint_problem(shared, events.horizon, hyper);
    run.namer = io::changepoint_param_namer();
  } else if (config.model_kind == "toy") {
    auto data = load_values(config.dataset);
    auto toy = models::make_toy_problem(*data, config.toy.sigma,
                                        config.toy.tau);
    run.problem.space = std::move(toy.space);
    run.problem.moves = std::move(toy.moves);
  } else {
    throw std::invalid_argument("unknown model kind: " + config.model_kind);
  }

  if (run.resolved.moves.auto_rj)
    attach_auto_rj(run, run.resolved.moves, config.seed);
  attach_wrappers(run, run.resolved.moves);

  run.sampler.iterations = config.iterations;
  run.sampler.burn_in = config.burn_in;
  run.sampler.thinning = config.thinning;
  run.sampler.replicate_count = config.replicates;
  run.sampler.rng_seed = config.seed;
  run.sampler.between_move_probability = config.between_move_probability;
  run.sampler.workers = config.workers;
  if (config.starting_model) {
    run.sampler.starting_model =
        run.problem.space->index_of_label(*config.starting_model);
    run.resolved.starting_model = *config.starting_model;
  } else {
    run.sampler.starting_model = 0;
    run.resolved.starting_model =
        run.problem.space->model(0).label();
  }
  run.sampler.within_move_scales.resize(
      static_cast<std::size_t>(run.problem.space->size()));
  for (const auto& [label, scales] : config.within_scales) {
    const int index = run.problem.space->index_of_label(label);
    run.sampler.within_move_scales[static_cast<std::size_t>(index)] = scales;
  }
  return run;
}

void run_command(const io::RunConfig& config) {
  PreparedRun run = prepare_run(config);
  const std::filesystem::path out =
      config.output_dir.empty() ? "." : config.output_dir;
  std::filesystem::create_directories(out);

  Trace trace = run_sampler(run.sampler, *run.problem.space,
                            *run.problem.moves, run.kernel);
  io::write_trace(trace, out, run.namer);
  io::write_resolved_config(run.resolved, out / "resolved_config.json");
}

namespace {

json series_json(const std::vector<std::size_t>& checkpoints) {
  json array = json::array();
  for (std::size_t c : checkpoints) array.push_back(c);
  return array;
}

void write_curve_csv(const std::filesystem::path& path,
                     const std::string& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << '\n';
  }
}

std::string num(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

bool looks_like_mixture(const std::filesystem::path& run_dir) {
  const auto config_path = run_dir / "resolved_config.json";
  if (!std::filesystem::exists(config_path)) return false;
  std::ifstream in(config_path);
  json root = json::parse(in, nullptr, false);
  return root.is_object() && root.contains("model") &&
         root.at("model") == "mixture";
}

}  // namespace

void diagnose_command(const std::filesystem::path& run_dir,
                      const std::filesystem::path& out_dir,
                      const DiagnoseOptions& options) {
  Trace trace = io::read_trace(run_dir);
  std::filesystem::create_directories(out_dir);

  json report;
  report["kind"] = "diagnostics";
  report["replicates"] = trace.replicates.size();
  report["lag"] = options.lag;

  std::vector<std::vector<int>> indicators;
  std::vector<std::vector<double>> deviances;
  for (const auto& replicate : trace.replicates) {
    std::vector<int> k_seq;
    std::vector<double> dev;
    for (const auto& s : replicate.states) {
      if (s.iteration <= options.burn_in) continue;
      k_seq.push_back(s.model_index);
      dev.push_back(s.deviance);
    }
    indicators.push_back(std::move(k_seq));
    deviances.push_back(std::move(dev));
  }

  if (trace.replicates.size() < 2) {
    report["warning"] =
        "single replicate: between-chain statistics unavailable";
    json visits = json::object();
    std::map<int, long> counts;
    for (int k : indicators[0]) counts[k] += 1;
    for (const auto& [k, n] : counts) visits[std::to_string(k)] = n;
    report["model_visit_counts"] = std::move(visits);
    std::ofstream out(out_dir / "diagnostics.json");
    out << report.dump(2) << '\n';
    return;
  }

  // Model-indicator tests.
  const auto ks =
      diagnostics::model_indicator_ks(indicators, options.lag,
                                      options.checkpoints);
  json ks_json;
  ks_json["checkpoints"] = series_json(ks.checkpoints);
  ks_json["pairs"] = json::array();
  std::vector<std::vector<std::string>> ks_rows;
  for (const auto& pair : ks.pairs) {
    json p;
    p["chain_a"] = pair.chain_a;
    p["chain_b"] = pair.chain_b;
    p["statistic"] = pair.statistic;
    p["p_value"] = pair.p_value;
    ks_json["pairs"].push_back(std::move(p));
    for (std::size_t i = 0; i < ks.checkpoints.size(); ++i)
      ks_rows.push_back({std::to_string(pair.chain_a),
                         std::to_string(pair.chain_b),
                         std::to_string(ks.checkpoints[i]),
                         num(pair.statistic[i]), num(pair.p_value[i])});
  }
  report["ks"] = std::move(ks_json);
  write_curve_csv(out_dir / "ks_pvalues.csv",
                  "chain_a,chain_b,checkpoint,statistic,p_value", ks_rows);

  const auto chisq = diagnostics::model_indicator_chisq(
      indicators, options.lag, options.checkpoints);
  json chisq_json;
  chisq_json["checkpoints"] = series_json(chisq.checkpoints);
  chisq_json["statistic"] = chisq.statistic;
  chisq_json["df"] = chisq.df;
  chisq_json["p_value"] = chisq.p_value;
  report["chisq"] = std::move(chisq_json);
  std::vector<std::vector<std::string>> chisq_rows;
  for (std::size_t i = 0; i < chisq.checkpoints.size(); ++i)
    chisq_rows.push_back({std::to_string(chisq.checkpoints[i]),
                          num(chisq.statistic[i]), num(chisq.df[i]),
                          num(chisq.p_value[i])});
  write_curve_csv(out_dir / "chisq.csv", "checkpoint,statistic,df,p_value",
                  chisq_rows);

  const auto psrf =
      diagnostics::mpsrf(deviances, indicators, options.checkpoints);
  json mpsrf_json;
  mpsrf_json["checkpoints"] = series_json(psrf.checkpoints);
  mpsrf_json["psrf_v"] = psrf.psrf_v;
  mpsrf_json["psrf_w"] = psrf.psrf_w;
  mpsrf_json["excluded_values"] = psrf.excluded_values;
  report["mpsrf"] = std::move(mpsrf_json);
  std::vector<std::vector<std::string>> mpsrf_rows;
  for (std::size_t i = 0; i < psrf.checkpoints.size(); ++i)
    mpsrf_rows.push_back({std::to_string(psrf.checkpoints[i]),
                          num(psrf.psrf_v[i]), num(psrf.psrf_w[i])});
  write_curve_csv(out_dir / "mpsrf.csv", "checkpoint,psrf_v,psrf_w",
                  mpsrf_rows);

  // Distance diagnostic for mixture traces: components as events in R^3.
  if (looks_like_mixture(run_dir)) {
    std::vector<std::vector<diagnostics::EventSet>> chains;
    for (const auto& replicate : trace.replicates) {
      std::vector<diagnostics::EventSet> states;
      for (const auto& s : replicate.states) {
        if (s.iteration <= options.burn_in) continue;
        const auto comps = models::unpack_components(s.params);
        diagnostics::EventSet events;
        for (const auto& c : comps)
          events.push_back({c.weight, c.mean, c.variance});
        states.push_back(std::move(events));
      }
      chains.push_back(std::move(states));
    }
    Rng rng(options.seed, 424242);
    const auto dist = diagnostics::distance_psrf(
        chains, options.reference_points, rng, options.checkpoints);
    json dist_json;
    dist_json["checkpoints"] = series_json(dist.checkpoints);
    dist_json["reference_points"] = dist.reference_points;
    dist_json["psrf"] = dist.psrf;
    dist_json["empty_event_states"] = dist.empty_event_states;
    report["distance_psrf"] = std::move(dist_json);
    std::vector<std::vector<std::string>> dist_rows;
    for (std::size_t p = 0; p < dist.psrf.size(); ++p)
      for (std::size_t i = 0; i < dist.checkpoints.size(); ++i)
        dist_rows.push_back({std::to_string(p),
                             std::to_string(dist.checkpoints[i]),
                             num(dist.psrf[p][i])});
    write_curve_csv(out_dir / "distance_psrf.csv", "point,checkpoint,psrf",
                    dist_rows);
  }

  std::ofstream out(out_dir / "diagnostics.json");
  if (!out)
    throw std::runtime_error("cannot write diagnostics report");
  out << report.dump(2) << '\n';
}

void estimate_command(const std::filesystem::path& run_dir,
                      const std::filesystem::path& out_dir,
                      const EstimateOptions& options) {
  Trace trace = io::read_trace(run_dir);
  std::filesystem::create_directories(out_dir);

  int n_models = 0;
  for (const auto& replicate : trace.replicates) {
    for (const auto& s : replicate.states)
      n_models = std::max(n_models, s.model_index + 1);
    for (const auto& a : replicate.acceptances)
      n_models = std::max({n_models, a.from_index + 1, a.to_index + 1});
  }

  const auto probs = estimation::posterior_model_probs(
      trace, options.burn_in, n_models);

  json report;
  report["kind"] = "estimates";
  report["replicates"] = trace.replicates.size();
  json prob_table = json::array();
  for (std::size_t i = 0; i < probs.model_index.size(); ++i) {
    json row;
    row["model_index"] = probs.model_index[i];
    row["probability"] = probs.probability[i];
    row["std_error"] = probs.std_error[i];
    row["visit_count"] = probs.visit_count[i];
    prob_table.push_back(std::move(row));
  }
  report["model_probabilities"] = std::move(prob_table);

  // Directly connected pairs = pairs with recorded attempts.
  std::set<std::pair<int, int>> pairs;
  for (const auto& replicate : trace.replicates)
    for (const auto& a : replicate.acceptances)
      pairs.insert(std::minmax(a.from_index, a.to_index));

  // The visit estimator needs the model prior; with visit counts as the
  // only information the uniform prior of the built-in problems applies
  // unless the resolved config says otherwise.
  std::vector<double> model_prior(static_cast<std::size_t>(n_models),
                                  1.0 / std::max(1, n_models));
  const auto config_path = run_dir / "resolved_config.json";
  if (std::filesystem::exists(config_path)) {
    std::ifstream in(config_path);
    json root = json::parse(in, nullptr, false);
    if (root.is_object() && root.contains("model") &&
        root.at("model") == "changepoint") {
      const double nu = root.at("changepoint").at("poisson_nu").get<double>();
      double total = 0.0;
      for (int k = 0; k < n_models; ++k) {
        model_prior[static_cast<std::size_t>(k)] = std::exp(
            stats::log_truncated_poisson_pmf(k, nu, n_models - 1));
        total += model_prior[static_cast<std::size_t>(k)];
      }
      for (double& p : model_prior) p /= total;
    }
  }

  json bf_table = json::array();
  for (const auto& [lo, hi] : pairs) {
    json row;
    row["model_from"] = lo;
    row["model_to"] = hi;
    try {
      const auto visits = estimation::bayes_factor_visits(
          trace, options.burn_in, hi, lo, model_prior);
      row["visits"] = {{"value", visits.value},
                       {"log_std_error", visits.log_std_error},
                       {"visits_to", visits.count_numerator},
                       {"visits_from", visits.count_denominator}};
    } catch (const std::exception& e) {
      row["visits"] = {{"error", e.what()}};
    }
    try {
      const auto bridge = estimation::bayes_factor_bridge(
          trace, hi, lo, options.include_burnin_attempts);
      row["bridge"] = {{"value", bridge.value},
                       {"log_std_error", bridge.log_std_error},
                       {"attempts_forward", bridge.count_numerator},
                       {"attempts_reverse", bridge.count_denominator}};
    } catch (const std::exception& e) {
      row["bridge"] = {{"error", e.what()}};
    }
    bf_table.push_back(std::move(row));
  }
  report["bayes_factors"] = std::move(bf_table);

  std::ofstream out(out_dir / "estimates.json");
  if (!out) throw std::runtime_error("cannot write estimates report");
  out << report.dump(2) << '\n';
}

}  // namespace rjmcmc::cli
