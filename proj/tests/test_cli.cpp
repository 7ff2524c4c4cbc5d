#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbsim/cli.hpp"

using namespace qbsim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("qbsim_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json report_without_timestamp(const fs::path& dir) {
  nlohmann::json j = nlohmann::json::parse(slurp(dir / "report.json"));
  j.erase("generated_at");
  return j;
}

}  // namespace

TEST_CASE("minimal clone config gets the documented defaults") {
  const cli::ScenarioConfig cfg = cli::parse_config(R"({"scenario":"clone","gamma":1.0})");
  CHECK(cfg.scenario == cli::Scenario::clone);
  CHECK(cfg.n_max == 40);
  CHECK(cfg.tolerances.tol == 1e-8);
  CHECK(cfg.tolerances.tail == 1e-10);
  REQUIRE(cfg.kappa.has_value());
  CHECK(*cfg.kappa == Complex{-1.0, 0.0});
  CHECK(cfg.resolved["n_max"] == 40);
  CHECK(cfg.resolved["tuning"]["kappa"][0] == -1.0);
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK_THROWS_WITH_AS(
      cli::parse_config(R"({"scenario":"clone","gamma":1.0,"gama":2})"),
      doctest::Contains("gama"), ValidationError);
  CHECK_THROWS_WITH_AS(
      cli::parse_config(
          R"({"scenario":"clone","gamma":1.0,"tolerances":{"tol":1e-8,"tolerance":1}})"),
      doctest::Contains("tolerances.tolerance"), ValidationError);
}

TEST_CASE("invalid JSON raises ParseError") {
  CHECK_THROWS_AS(cli::parse_config("{"), ParseError);
}

TEST_CASE("inconsistent kappa and atom amplitudes are rejected") {
  const std::string text = R"({
    "scenario": "clone", "gamma": 1.0,
    "tuning": {"kappa": [2.0, 0.0], "alpha": [-0.70710678118654752, 0.0],
               "beta": [0.70710678118654752, 0.0], "r": 1.0}
  })";
  CHECK_THROWS_AS(cli::parse_config(text), ValidationError);
}

TEST_CASE("consistent atom amplitudes resolve to their kappa") {
  const std::string text = R"({
    "scenario": "clone", "gamma": 1.0,
    "tuning": {"alpha": [-0.70710678118654752, 0.0],
               "beta": [0.70710678118654752, 0.0], "r": 1.0}
  })";
  const cli::ScenarioConfig cfg = cli::parse_config(text);
  REQUIRE(cfg.kappa.has_value());
  CHECK(std::abs(*cfg.kappa - Complex{-1.0, 0.0}) < 1e-12);
}

TEST_CASE("discriminate configs require a seed") {
  const std::string text = R"({
    "scenario": "discriminate", "n_max": 16, "attenuation": 0.1,
    "mixtures": {"rho": [{"weight": 1.0, "gamma": 1.0}],
                 "sigma": [{"weight": 1.0, "gamma": [0.0, 1.0]}]},
    "monte_carlo": {"n_samples": 1000}
  })";
  CHECK_THROWS_WITH_AS(cli::parse_config(text), doctest::Contains("seed"),
                       ValidationError);
}

TEST_CASE("scenario-specific sections are rejected elsewhere") {
  CHECK_THROWS_AS(
      cli::parse_config(
          R"({"scenario":"clone","gamma":1.0,"monte_carlo":{"seed":1}})"),
      ValidationError);
  CHECK_THROWS_AS(
      cli::parse_config(R"({"scenario":"clone","gamma":1.0,"channel":{"g":1.0}})"),
      ValidationError);
}

TEST_CASE("overrides rewrite dotted paths") {
  nlohmann::json base = nlohmann::json::parse(
      R"({"scenario":"discriminate","monte_carlo":{"seed":1,"n_samples":10}})");
  const nlohmann::json patched = cli::apply_overrides(
      base, {"monte_carlo.seed=99", "n_max=12", "gamma=[0.5,0.5]"});
  CHECK(patched["monte_carlo"]["seed"] == 99);
  CHECK(patched["monte_carlo"]["n_samples"] == 10);
  CHECK(patched["n_max"] == 12);
  CHECK(patched["gamma"][1] == 0.5);
  CHECK_THROWS_AS(cli::apply_overrides(base, {"no_equals_sign"}), ValidationError);
}

TEST_CASE("clone scenario writes a report with high fidelity") {
  const fs::path dir = fresh_dir("clone");
  const cli::ScenarioConfig cfg =
      cli::parse_config(R"({"scenario":"clone","gamma":1.0,"n_max":32})");
  CHECK(cli::run_scenario(cfg, dir.string(), true) == cli::kExitOk);
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["fidelity_clone"].get<double>() >= 1.0 - 1e-8);
  CHECK(report["config"]["n_max"] == 32);
  CHECK(report["config"]["tolerances"]["tail"] == 1e-10);
  fs::remove_all(dir);
}

TEST_CASE("broadcast scenario flags unequal marginals without failing") {
  const fs::path dir = fresh_dir("broadcast");
  const cli::ScenarioConfig cfg = cli::parse_config(R"({
    "scenario": "broadcast", "n_max": 20,
    "tuning": {"kappa": [-2.0, 0.0]},
    "mixtures": {"input": [{"weight": 1.0, "gamma": 1.0}]}
  })");
  CHECK(cli::run_scenario(cfg, dir.string(), true) == cli::kExitOk);
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["marginals_equal"] == false);
  CHECK(report["marginal_distance"].get<double>() > 0.01);
  CHECK(fs::exists(dir / "series.csv"));
  const std::string csv = slurp(dir / "series.csv");
  CHECK(csv.rfind("n,marginal1,marginal2\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("attenuate sweep writes one series row per A value") {
  const fs::path dir = fresh_dir("attenuate");
  const cli::ScenarioConfig cfg = cli::parse_config(R"({
    "scenario": "attenuate", "n_max": 16,
    "attenuation": [0.2, 0.1, 0.05],
    "mixtures": {"rho": [{"weight": 1.0, "gamma": 1.0}],
                 "sigma": [{"weight": 1.0, "gamma": [0.0, 1.0]}]}
  })");
  CHECK(cli::run_scenario(cfg, dir.string(), true) == cli::kExitOk);
  const std::string csv = slurp(dir / "series.csv");
  int lines = 0;
  for (const char c : csv) lines += (c == '\n');
  CHECK(lines == 4);  // header + three rows
  CHECK(csv.rfind("A,pmax,pmax_over_A2\n", 0) == 0);

  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  REQUIRE(report["sweep"].size() == 3);
  const double pmax = report["sweep"][1]["pmax"].get<double>();
  const double s_expected = std::sqrt(1.0 + 1e-4) / 1.01;
  CHECK(pmax == doctest::Approx(1.0 - s_expected).epsilon(1e-9));
  fs::remove_all(dir);
}

TEST_CASE("discriminate reports are byte-identical for a fixed seed") {
  const std::string text = R"({
    "scenario": "discriminate", "n_max": 16, "attenuation": 0.1,
    "mixtures": {"rho": [{"weight": 1.0, "gamma": 1.0}],
                 "sigma": [{"weight": 1.0, "gamma": [0.0, 1.0]}]},
    "monte_carlo": {"n_samples": 20000, "seed": 42}
  })";
  const cli::ScenarioConfig cfg = cli::parse_config(text);
  const fs::path dir1 = fresh_dir("disc1");
  const fs::path dir2 = fresh_dir("disc2");
  CHECK(cli::run_scenario(cfg, dir1.string(), true) == cli::kExitOk);
  CHECK(cli::run_scenario(cfg, dir2.string(), true) == cli::kExitOk);
  CHECK(report_without_timestamp(dir1).dump() == report_without_timestamp(dir2).dump());

  const nlohmann::json report = report_without_timestamp(dir1);
  CHECK(report["counts"]["errors"] == 0);
  CHECK(report["config"]["monte_carlo"]["seed"] == 42);
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("steady_state scenario records convergence and residuals") {
  const fs::path dir = fresh_dir("steady");
  const cli::ScenarioConfig cfg = cli::parse_config(R"({
    "scenario": "steady_state", "n_max": 10, "gamma": 0.6,
    "tolerances": {"tol": 1e-4, "max_iter": 300},
    "channel": {"g": 1.0, "r": 1.0, "tau": 0.9, "include_stark": true,
                "alpha": [-0.70710678118654752, 0.0],
                "beta": [0.70710678118654752, 0.0]}
  })");
  CHECK(cli::run_scenario(cfg, dir.string(), true) == cli::kExitOk);
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["converged"] == true);
  CHECK(report["analytic_fixed_point_residual"].get<double>() < 1e-9);
  CHECK(report["iterate_vs_analytic_distance"].get<double>() > 0.05);
  CHECK(report["kraus_completeness_error"].get<double>() < 1e-10);
  CHECK(fs::exists(dir / "series.csv"));
  fs::remove_all(dir);
}

TEST_CASE("non-convergence exits with the physics failure code") {
  const fs::path dir = fresh_dir("steady_fail");
  const cli::ScenarioConfig cfg = cli::parse_config(R"({
    "scenario": "steady_state", "n_max": 14, "gamma": 1.0,
    "tolerances": {"tol": 1e-10, "max_iter": 5},
    "channel": {"g": 1.0, "r": 1.0, "tau": 0.9,
                "alpha": [-0.70710678118654752, 0.0],
                "beta": [0.70710678118654752, 0.0]}
  })");
  CHECK(cli::run_scenario(cfg, dir.string(), true) == cli::kExitPhysicsFailure);
  // the report is still written, with the failure recorded
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["converged"] == false);
  fs::remove_all(dir);
}

TEST_CASE("steady_state also accepts a mixture input") {
  const fs::path dir = fresh_dir("steady_mix");
  const cli::ScenarioConfig cfg = cli::parse_config(R"({
    "scenario": "steady_state", "n_max": 10,
    "mixtures": {"input": [{"weight": 0.5, "gamma": 0.5},
                           {"weight": 0.5, "gamma": [0.0, 0.4]}]},
    "tolerances": {"tol": 1e-4, "max_iter": 300},
    "channel": {"g": 1.0, "r": 1.0, "tau": 0.9,
                "alpha": [-0.70710678118654752, 0.0],
                "beta": [0.70710678118654752, 0.0]}
  })");
  CHECK(cli::run_scenario(cfg, dir.string(), true) == cli::kExitOk);
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["converged"] == true);
  // the analytic comparison only applies to coherent inputs
  CHECK_FALSE(report.contains("iterate_vs_analytic_distance"));
  fs::remove_all(dir);
}

#ifdef QBSIM_CONFIG_DIR
TEST_CASE("the shipped example configs parse") {
  for (const auto& entry : fs::directory_iterator(QBSIM_CONFIG_DIR)) {
    CHECK_NOTHROW(cli::parse_config(slurp(entry.path())));
  }
}
#endif

#ifdef QBSIM_CLI_BIN
TEST_CASE("the binary runs end to end") {
  const fs::path dir = fresh_dir("binary");
  const fs::path config_path = dir / "config.json";
  {
    std::ofstream out(config_path);
    out << R"({"scenario":"clone","gamma":0.5,"n_max":24})";
  }
  const std::string cmd = std::string(QBSIM_CLI_BIN) + " --config " +
                          config_path.string() + " --out " + dir.string() +
                          " --quiet --override gamma=1.0";
  CHECK(std::system(cmd.c_str()) == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(report["config"]["gamma"][0] == 1.0);

  // config errors exit with code 1 and put a JSON object on stderr
  const fs::path errfile = dir / "stderr.txt";
  const std::string bad = std::string(QBSIM_CLI_BIN) + " --config " +
                          config_path.string() + " --out " + dir.string() +
                          " --quiet --override scenario=nope 2>" +
                          errfile.string();
  const int status = std::system(bad.c_str());
  CHECK(WEXITSTATUS(status) == 1);
  const nlohmann::json err = nlohmann::json::parse(slurp(errfile));
  CHECK(err["error"]["type"] == "ValidationError");
  fs::remove_all(dir);
}
#endif
