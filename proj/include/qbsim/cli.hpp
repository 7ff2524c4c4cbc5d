#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbsim/fock.hpp"
#include "qbsim/io.hpp"

namespace qbsim::cli {

enum class Scenario { clone, broadcast, steady_state, attenuate, discriminate };

std::string to_string(Scenario s);

struct MonteCarloSpec {
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 0;
};

struct Tolerances {
  double tol = 1e-8;
  double tail = 1e-10;
  int max_iter = 10000;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::clone;
  int n_max = 40;
  Tolerances tolerances;
  std::optional<Complex> kappa;
  std::optional<Complex> gamma;
  std::map<std::string, std::vector<CoherentTerm>> mixtures;
  std::vector<double> attenuation;  // one or more A values
  std::optional<ChannelSpec> channel;
  std::optional<MonteCarloSpec> monte_carlo;

  // the fully resolved config (defaults applied), embedded in every report
  nlohmann::json resolved;
};

/// Parse and validate a scenario config. Unknown keys are rejected with the
/// offending path; missing required fields and cross-field inconsistencies
/// (e.g. kappa disagreeing with alpha/(beta r)) raise ValidationError.
ScenarioConfig parse_config(const std::string& text);

/// Apply --override key=value entries (dot paths into the config JSON) before
/// validation. Values parse as JSON when possible, else as strings.
nlohmann::json apply_overrides(nlohmann::json config,
                               const std::vector<std::string>& overrides);

// exit codes: 0 success, 1 config error, 2 physics-check failure
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitPhysicsFailure = 2;

/// Run one scenario, writing report.json (and series.csv where the scenario
/// produces a series) into out_dir. Returns the process exit code; failures
/// also emit a machine-readable JSON object on stderr.
int run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                 bool quiet = false);

/// Full front end: load config file, apply overrides, run. Used by the
/// command-line binary and by tests.
int run_from_file(const std::string& config_path, const std::string& out_dir,
                  const std::vector<std::string>& overrides, bool quiet);

}  // namespace qbsim::cli
