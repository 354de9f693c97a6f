#include "doctest.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "rjmcmc/cli/commands.hpp"
#include "rjmcmc/models/simulate.hpp"
#include "rjmcmc/rng.hpp"
#include "support/json_schema.hpp"

using namespace rjmcmc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("rjmcmc_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

io::RunConfig toy_config(const fs::path& dir, int replicates = 2) {
  Rng rng(5150);
  std::vector<double> data;
  for (int i = 0; i < 30; ++i) data.push_back(rng.normal(0.4, 1.0));
  io::write_values_file(dir / "toy_data.txt", data);

  io::RunConfig config;
  config.model_kind = "toy";
  config.dataset = (dir / "toy_data.txt").string();
  config.output_dir = (dir / "run").string();
  config.seed = 31415;
  config.iterations = 4000;
  config.burn_in = 500;
  config.replicates = replicates;
  return config;
}

json schema(const char* name) {
  return json::parse(read_file(fs::path(PROJECT_SOURCE_DIR) / "docs" / name));
}

}  // namespace

TEST_CASE("run command writes per-replicate files and the resolved config") {
  TempDir dir;
  const auto config = toy_config(dir.path, 3);
  cli::run_command(config);

  for (int r = 0; r < 3; ++r) {
    CHECK(fs::exists(io::states_file(config.output_dir, r)));
    CHECK(fs::exists(io::params_file(config.output_dir, r)));
    CHECK(fs::exists(io::accepts_file(config.output_dir, r)));
  }
  CHECK(fs::exists(fs::path(config.output_dir) / "resolved_config.json"));

  // The resolved config re-parses and re-runs identically.
  const auto resolved =
      io::parse_config(fs::path(config.output_dir) / "resolved_config.json");
  CHECK(resolved.model_kind == "toy");
  CHECK(resolved.seed == config.seed);
}

TEST_CASE("same seed twice: byte-identical outputs") {
  TempDir dir;
  auto config = toy_config(dir.path);
  cli::run_command(config);
  const std::string first =
      read_file(io::states_file(config.output_dir, 0)) +
      read_file(io::params_file(config.output_dir, 0)) +
      read_file(io::accepts_file(config.output_dir, 0));

  config.output_dir = (dir.path / "run2").string();
  cli::run_command(config);
  const std::string second =
      read_file(io::states_file(config.output_dir, 0)) +
      read_file(io::params_file(config.output_dir, 0)) +
      read_file(io::accepts_file(config.output_dir, 0));
  CHECK(first == second);
}

TEST_CASE("diagnose: identical replicates give flat statistics") {
  TempDir dir;
  auto config = toy_config(dir.path, 1);
  cli::run_command(config);

  // Duplicate replicate 0 as replicate 1: identical chains.
  for (const char* base : {"states_r", "params_r", "accepts_r"}) {
    fs::copy_file(fs::path(config.output_dir) / (std::string(base) + "0.csv"),
                  fs::path(config.output_dir) / (std::string(base) + "1.csv"));
  }
  // Patch the replicate column of the copy.
  for (const char* base : {"states_r1.csv", "params_r1.csv", "accepts_r1.csv"}) {
    const fs::path p = fs::path(config.output_dir) / base;
    std::string text = read_file(p);
    std::string patched;
    std::stringstream ss(text);
    std::string line;
    bool header = true;
    while (std::getline(ss, line)) {
      if (!header && !line.empty() && line[0] == '0') line[0] = '1';
      header = false;
      patched += line + "\n";
    }
    std::ofstream(p) << patched;
  }

  const fs::path report_dir = dir.path / "diag";
  cli::diagnose_command(config.output_dir, report_dir, {});
  const json report = json::parse(read_file(report_dir / "diagnostics.json"));

  for (const auto& pair : report.at("ks").at("pairs"))
    for (const auto& p : pair.at("p_value"))
      CHECK(p.get<double>() == doctest::Approx(1.0));
  for (const auto& v : report.at("chisq").at("statistic"))
    CHECK(v.get<double>() == doctest::Approx(0.0));
  for (const auto& v : report.at("mpsrf").at("psrf_v"))
    CHECK(v.get<double>() == doctest::Approx(1.0));
  for (const auto& v : report.at("mpsrf").at("psrf_w"))
    CHECK(v.get<double>() == doctest::Approx(1.0));

  CHECK(fs::exists(report_dir / "ks_pvalues.csv"));
  CHECK(fs::exists(report_dir / "chisq.csv"));
  CHECK(fs::exists(report_dir / "mpsrf.csv"));

  // The report validates against the published schema.
  const auto errors =
      test_support::validate_schema(schema("diagnostics_report.schema.json"),
                                    report);
  for (const auto& e : errors) FAIL_CHECK(e);
  CHECK(errors.empty());
}

TEST_CASE("diagnose: single replicate warns instead of failing") {
  TempDir dir;
  auto config = toy_config(dir.path, 1);
  cli::run_command(config);
  const fs::path report_dir = dir.path / "diag";
  cli::diagnose_command(config.output_dir, report_dir, {});
  const json report = json::parse(read_file(report_dir / "diagnostics.json"));
  CHECK(report.contains("warning"));
  CHECK(report.contains("model_visit_counts"));
}

TEST_CASE("mixture run: diagnose emits the distance diagnostic") {
  TempDir dir;
  Rng rng(5151);
  std::vector<models::MixtureComponent> comps = {{0.5, -4.0, 1.0},
                                                 {0.5, 4.0, 1.0}};
  io::write_values_file(dir.path / "mix.txt",
                        models::simulate_mixture(comps, 60, rng));
  io::RunConfig config;
  config.model_kind = "mixture";
  config.dataset = (dir.path / "mix.txt").string();
  config.output_dir = (dir.path / "run").string();
  config.seed = 999;
  config.iterations = 2500;
  config.burn_in = 500;
  config.thinning = 2;
  config.replicates = 2;
  config.mixture.k_max = 4;
  cli::run_command(config);

  cli::DiagnoseOptions options;
  options.reference_points = 100;
  const fs::path report_dir = dir.path / "diag";
  cli::diagnose_command(config.output_dir, report_dir, options);
  const json report = json::parse(read_file(report_dir / "diagnostics.json"));
  REQUIRE(report.contains("distance_psrf"));
  CHECK(report.at("distance_psrf").at("psrf").size() == 100);
  CHECK(fs::exists(report_dir / "distance_psrf.csv"));

  const auto errors =
      test_support::validate_schema(schema("diagnostics_report.schema.json"),
                                    report);
  for (const auto& e : errors) FAIL_CHECK(e);
  CHECK(errors.empty());
}

TEST_CASE("estimate: probabilities, bayes factors and attempt counts") {
  TempDir dir;
  auto config = toy_config(dir.path);
  cli::run_command(config);
  const fs::path report_dir = dir.path / "est";
  cli::estimate_command(config.output_dir, report_dir, {});
  const json report = json::parse(read_file(report_dir / "estimates.json"));

  double total = 0.0;
  for (const auto& row : report.at("model_probabilities"))
    total += row.at("probability").get<double>();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  REQUIRE(report.at("bayes_factors").size() == 1);
  const auto& bf = report.at("bayes_factors")[0];
  CHECK(bf.at("bridge").contains("attempts_forward"));
  CHECK(bf.at("bridge").contains("attempts_reverse"));
  CHECK(bf.at("visits").contains("value"));

  const auto errors = test_support::validate_schema(
      schema("estimates_report.schema.json"), report);
  for (const auto& e : errors) FAIL_CHECK(e);
  CHECK(errors.empty());
}

TEST_CASE("estimate: single-model trace flags the bridge, keeps probability 1") {
  TempDir dir;
  auto config = toy_config(dir.path, 1);
  config.between_move_probability = 0.0;  // never leaves the starting model
  cli::run_command(config);
  const fs::path report_dir = dir.path / "est";
  cli::estimate_command(config.output_dir, report_dir, {});
  const json report = json::parse(read_file(report_dir / "estimates.json"));
  CHECK(report.at("model_probabilities")[0].at("probability").get<double>() ==
        doctest::Approx(1.0));
  CHECK(report.at("bayes_factors").empty());
}

TEST_CASE("toy run: 1e5 iterations complete within the 60 s budget") {
  TempDir dir;
  auto config = toy_config(dir.path, 1);
  config.iterations = 100000;
  config.burn_in = 10000;
  config.thinning = 10;
  const auto start = std::chrono::steady_clock::now();
  cli::run_command(config);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  CHECK(seconds < 60.0);
}
