#include "rjmcmc/io/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rjmcmc::io {

using nlohmann::json;

namespace {

void check_keys(const json& object, const std::string& where,
                const std::set<std::string>& allowed) {
  std::vector<std::string> unknown;
  for (auto it = object.begin(); it != object.end(); ++it)
    if (!allowed.count(it.key())) unknown.push_back(where + it.key());
  if (!unknown.empty()) {
    std::string message = "config: unknown keys:";
    for (const auto& k : unknown) message += " " + k;
    throw std::invalid_argument(message);
  }
}

template <typename T>
void read_into(const json& object, const char* key, T& target) {
  if (object.contains(key)) target = object.at(key).get<T>();
}

void read_into(const json& object, const char* key,
               std::optional<double>& target) {
  if (object.contains(key)) target = object.at(key).get<double>();
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json();
}

void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config: " + field + ": " + why);
}

}  // namespace

void validate_config(RunConfig& config) {
  const auto& mv = config.moves;
  // Field-level invariants.
  static const std::set<std::string> kinds = {"mixture", "ar", "changepoint",
                                              "toy"};
  if (!kinds.count(config.model_kind))
    fail("model", "must be one of mixture | ar | changepoint | toy");
  if (config.iterations <= 0) fail("iterations", "must be > 0");
  if (config.burn_in < 0 || config.burn_in >= config.iterations)
    fail("burn_in", "need 0 <= burn_in < iterations");
  if (config.thinning < 1) fail("thinning", "must be >= 1");
  if (config.replicates < 1) fail("replicates", "must be >= 1");
  if (config.workers < 0) fail("workers", "must be >= 0");
  if (!(config.between_move_probability >= 0.0 &&
        config.between_move_probability <= 1.0))
    fail("between_move_probability", "must lie in [0, 1]");
  if (!(config.moves.dr_shrink > 0.0)) fail("moves.dr_shrink", "must be > 0");
  if (!(config.moves.annealed_gamma >= 1.0))
    fail("moves.annealed_gamma", "must be >= 1");
  if (config.moves.annealed_kappa < 0)
    fail("moves.annealed_kappa", "must be >= 0");
  if (!(config.toy.sigma > 0.0)) fail("toy.sigma", "must be > 0");
  if (!(config.toy.tau > 0.0)) fail("toy.tau", "must be > 0");

  // Move-set validity per model kind.
  if (config.model_kind == "mixture") {
    if (!mv.split_merge && !mv.birth_death)
      fail("moves", "mixture needs split_merge or birth_death");
    if (mv.delayed_rejection || mv.annealed || mv.auto_rj)
      fail("moves",
           "delayed_rejection, annealed and auto_rj need moves with "
           "deterministic reverses; not available for mixture");
  } else {
    if (!mv.birth_death && !mv.auto_rj)
      fail("moves", "need birth_death or auto_rj");
    if (config.model_kind == "changepoint" &&
        (mv.delayed_rejection || mv.annealed || mv.auto_rj))
      fail("moves",
           "delayed_rejection, annealed and auto_rj are not available for "
           "changepoint (the reverse move picks a change-point)");
    if (mv.delayed_rejection && mv.annealed)
      fail("moves", "pick one of delayed_rejection and annealed");
    if (mv.auto_rj && (mv.delayed_rejection || mv.annealed))
      fail("moves", "auto_rj replaces the base move; no wrapper on top");
  }
  if (config.model_kind != "mixture") {
    if (mv.calibrate_split_u1)
      fail("moves.calibrate_split_u1", "only valid for the mixture model");
    // Mixture-only switches are normalised away so the resolved echo
    // re-parses cleanly for every kind.
    config.moves.split_merge = false;
  }

}

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: parse error: ") +
                                e.what());
  }

  check_keys(root, "",
             {"model", "dataset", "output_dir", "seed", "iterations",
              "burn_in", "thinning", "replicates", "workers",
              "between_move_probability", "starting_model", "moves",
              "mixture", "ar", "changepoint", "toy", "within_scales"});

  RunConfig config;
  read_into(root, "model", config.model_kind);
  read_into(root, "dataset", config.dataset);
  read_into(root, "output_dir", config.output_dir);
  read_into(root, "seed", config.seed);
  read_into(root, "iterations", config.iterations);
  read_into(root, "burn_in", config.burn_in);
  read_into(root, "thinning", config.thinning);
  read_into(root, "replicates", config.replicates);
  read_into(root, "workers", config.workers);
  read_into(root, "between_move_probability", config.between_move_probability);
  if (root.contains("starting_model"))
    config.starting_model = root.at("starting_model").get<int>();

  if (root.contains("moves")) {
    const auto& m = root.at("moves");
    check_keys(m, "moves.",
               {"split_merge", "birth_death", "calibrate_split_u1",
                "delayed_rejection", "dr_shrink", "annealed",
                "annealed_gamma", "annealed_kappa", "annealed_within_scale",
                "auto_rj", "auto_rj_pilot_iterations", "auto_rj_pilot_burnin",
                "auto_rj_pilot_scale"});
    read_into(m, "split_merge", config.moves.split_merge);
    read_into(m, "birth_death", config.moves.birth_death);
    read_into(m, "calibrate_split_u1", config.moves.calibrate_split_u1);
    read_into(m, "delayed_rejection", config.moves.delayed_rejection);
    read_into(m, "dr_shrink", config.moves.dr_shrink);
    read_into(m, "annealed", config.moves.annealed);
    read_into(m, "annealed_gamma", config.moves.annealed_gamma);
    read_into(m, "annealed_kappa", config.moves.annealed_kappa);
    read_into(m, "annealed_within_scale", config.moves.annealed_within_scale);
    read_into(m, "auto_rj", config.moves.auto_rj);
    read_into(m, "auto_rj_pilot_iterations",
              config.moves.auto_rj_pilot_iterations);
    read_into(m, "auto_rj_pilot_burnin", config.moves.auto_rj_pilot_burnin);
    read_into(m, "auto_rj_pilot_scale", config.moves.auto_rj_pilot_scale);
  }
  if (root.contains("mixture")) {
    const auto& m = root.at("mixture");
    check_keys(m, "mixture.", {"delta", "xi", "kappa", "alpha", "beta", "k_max"});
    read_into(m, "delta", config.mixture.delta);
    read_into(m, "xi", config.mixture.xi);
    read_into(m, "kappa", config.mixture.kappa);
    read_into(m, "alpha", config.mixture.alpha);
    read_into(m, "beta", config.mixture.beta);
    read_into(m, "k_max", config.mixture.k_max);
  }
  if (root.contains("ar")) {
    const auto& m = root.at("ar");
    check_keys(m, "ar.", {"coef_sd", "noise_shape", "noise_scale", "k_max"});
    read_into(m, "coef_sd", config.ar.coef_sd);
    read_into(m, "noise_shape", config.ar.noise_shape);
    read_into(m, "noise_scale", config.ar.noise_scale);
    read_into(m, "k_max", config.ar.k_max);
  }
  if (root.contains("changepoint")) {
    const auto& m = root.at("changepoint");
    check_keys(m, "changepoint.",
               {"height_shape", "height_rate", "poisson_nu", "k_max",
                "position_walk_sd", "height_log_walk_sd"});
    read_into(m, "height_shape", config.changepoint.height_shape);
    read_into(m, "height_rate", config.changepoint.height_rate);
    read_into(m, "poisson_nu", config.changepoint.poisson_nu);
    read_into(m, "k_max", config.changepoint.k_max);
    read_into(m, "position_walk_sd", config.changepoint.position_walk_sd);
    read_into(m, "height_log_walk_sd", config.changepoint.height_log_walk_sd);
  }
  if (root.contains("toy")) {
    const auto& m = root.at("toy");
    check_keys(m, "toy.", {"sigma", "tau"});
    read_into(m, "sigma", config.toy.sigma);
    read_into(m, "tau", config.toy.tau);
  }
  if (root.contains("within_scales")) {
    for (auto it = root.at("within_scales").begin();
         it != root.at("within_scales").end(); ++it) {
      config.within_scales[std::stoi(it.key())] =
          it.value().get<std::vector<double>>();
    }
  }

  // An explicit split_merge request outside the mixture kind is a user
  // error; the silent struct default is normalised away below.
  if (config.model_kind != "mixture" && root.contains("moves") &&
      root.at("moves").contains("split_merge") &&
      root.at("moves").at("split_merge").get<bool>())
    fail("moves.split_merge", "only valid for the mixture model");

  validate_config(config);
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string config_to_json(const RunConfig& c) {
  json root;
  root["model"] = c.model_kind;
  root["dataset"] = c.dataset;
  root["output_dir"] = c.output_dir;
  root["seed"] = c.seed;
  root["iterations"] = c.iterations;
  root["burn_in"] = c.burn_in;
  root["thinning"] = c.thinning;
  root["replicates"] = c.replicates;
  root["workers"] = c.workers;
  root["between_move_probability"] = c.between_move_probability;
  if (c.starting_model) root["starting_model"] = *c.starting_model;
  json moves;
  moves["split_merge"] = c.moves.split_merge;
  moves["birth_death"] = c.moves.birth_death;
  moves["calibrate_split_u1"] = c.moves.calibrate_split_u1;
  moves["delayed_rejection"] = c.moves.delayed_rejection;
  moves["dr_shrink"] = c.moves.dr_shrink;
  moves["annealed"] = c.moves.annealed;
  moves["annealed_gamma"] = c.moves.annealed_gamma;
  moves["annealed_kappa"] = c.moves.annealed_kappa;
  moves["annealed_within_scale"] = c.moves.annealed_within_scale;
  moves["auto_rj"] = c.moves.auto_rj;
  moves["auto_rj_pilot_iterations"] = c.moves.auto_rj_pilot_iterations;
  moves["auto_rj_pilot_burnin"] = c.moves.auto_rj_pilot_burnin;
  moves["auto_rj_pilot_scale"] = c.moves.auto_rj_pilot_scale;
  root["moves"] = std::move(moves);

  json mixture;
  if (c.mixture.delta) mixture["delta"] = optional_json(c.mixture.delta);
  if (c.mixture.xi) mixture["xi"] = optional_json(c.mixture.xi);
  if (c.mixture.kappa) mixture["kappa"] = optional_json(c.mixture.kappa);
  if (c.mixture.alpha) mixture["alpha"] = optional_json(c.mixture.alpha);
  if (c.mixture.beta) mixture["beta"] = optional_json(c.mixture.beta);
  mixture["k_max"] = c.mixture.k_max;
  root["mixture"] = std::move(mixture);

  json ar;
  if (c.ar.coef_sd) ar["coef_sd"] = optional_json(c.ar.coef_sd);
  if (c.ar.noise_shape) ar["noise_shape"] = optional_json(c.ar.noise_shape);
  if (c.ar.noise_scale) ar["noise_scale"] = optional_json(c.ar.noise_scale);
  ar["k_max"] = c.ar.k_max;
  root["ar"] = std::move(ar);

  json cp;
  if (c.changepoint.height_shape)
    cp["height_shape"] = optional_json(c.changepoint.height_shape);
  if (c.changepoint.height_rate)
    cp["height_rate"] = optional_json(c.changepoint.height_rate);
  if (c.changepoint.poisson_nu)
    cp["poisson_nu"] = optional_json(c.changepoint.poisson_nu);
  if (c.changepoint.position_walk_sd)
    cp["position_walk_sd"] = optional_json(c.changepoint.position_walk_sd);
  if (c.changepoint.height_log_walk_sd)
    cp["height_log_walk_sd"] = optional_json(c.changepoint.height_log_walk_sd);
  cp["k_max"] = c.changepoint.k_max;
  root["changepoint"] = std::move(cp);

  json toy;
  toy["sigma"] = c.toy.sigma;
  toy["tau"] = c.toy.tau;
  root["toy"] = std::move(toy);

  json scales = json::object();
  for (const auto& [label, values] : c.within_scales)
    scales[std::to_string(label)] = values;
  root["within_scales"] = std::move(scales);

  return root.dump(2) + "\n";
}

void write_resolved_config(const RunConfig& config,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("config: cannot write " + path.string());
  out << config_to_json(config);
}

}  // namespace rjmcmc::io
