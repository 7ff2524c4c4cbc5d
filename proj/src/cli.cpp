#include "qbsim/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "qbsim/broadcast.hpp"
#include "qbsim/cavity.hpp"
#include "qbsim/discrimination.hpp"

namespace qbsim::cli {

namespace {

using nlohmann::json;

const std::map<std::string, Scenario> kScenarioNames = {
    {"clone", Scenario::clone},
    {"broadcast", Scenario::broadcast},
    {"steady_state", Scenario::steady_state},
    {"attenuate", Scenario::attenuate},
    {"discriminate", Scenario::discriminate}};

void reject_unknown_keys(const json& object, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    (void)value;
    if (allowed.count(key) == 0) {
      throw ValidationError(path.empty() ? key : path + "." + key,
                            "unknown key");
    }
  }
}

double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path, "expected a number");
  return j.get<double>();
}

Complex parse_complex(const json& j, const std::string& path) {
  try {
    return complex_from_json(j);
  } catch (const ParseError&) {
    throw ValidationError(path, "expected a number or an [re, im] pair");
  }
}

std::vector<CoherentTerm> parse_mixture(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw ValidationError(path, "a mixture is a nonempty array of terms");
  }
  std::vector<CoherentTerm> terms;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string term_path = path + "[" + std::to_string(i) + "]";
    if (!j[i].is_object()) throw ValidationError(term_path, "expected an object");
    reject_unknown_keys(j[i], term_path, {"weight", "gamma"});
    if (!j[i].contains("weight") || !j[i].contains("gamma")) {
      throw ValidationError(term_path, "terms need 'weight' and 'gamma'");
    }
    terms.push_back({require_number(j[i]["weight"], term_path + ".weight"),
                     parse_complex(j[i]["gamma"], term_path + ".gamma")});
  }
  return terms;
}

json complex_json(Complex z) { return {z.real(), z.imag()}; }

json mixture_json(const std::vector<CoherentTerm>& terms) {
  json out = json::array();
  for (const auto& t : terms) {
    out.push_back({{"weight", t.weight}, {"gamma", complex_json(t.gamma)}});
  }
  return out;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ScenarioConfig config_from_json(const json& root) {
  if (!root.is_object()) {
    throw ValidationError("", "config must be a JSON object");
  }
  reject_unknown_keys(root, "",
                      {"scenario", "n_max", "tolerances", "tuning", "gamma",
                       "mixtures", "attenuation", "channel", "monte_carlo"});

  ScenarioConfig cfg;

  if (!root.contains("scenario") || !root["scenario"].is_string()) {
    throw ValidationError("scenario", "required string field");
  }
  const auto it = kScenarioNames.find(root["scenario"].get<std::string>());
  if (it == kScenarioNames.end()) {
    throw ValidationError("scenario",
                          "unknown scenario '" +
                              root["scenario"].get<std::string>() + "'");
  }
  cfg.scenario = it->second;

  if (root.contains("n_max")) {
    if (!root["n_max"].is_number_integer()) {
      throw ValidationError("n_max", "expected an integer");
    }
    cfg.n_max = root["n_max"].get<int>();
  }
  if (cfg.n_max < 1) throw ValidationError("n_max", "n_max must be >= 1");

  if (root.contains("tolerances")) {
    const json& t = root["tolerances"];
    if (!t.is_object()) throw ValidationError("tolerances", "expected an object");
    reject_unknown_keys(t, "tolerances", {"tol", "tail", "max_iter"});
    if (t.contains("tol")) cfg.tolerances.tol = require_number(t["tol"], "tolerances.tol");
    if (t.contains("tail")) cfg.tolerances.tail = require_number(t["tail"], "tolerances.tail");
    if (t.contains("max_iter")) {
      if (!t["max_iter"].is_number_integer()) {
        throw ValidationError("tolerances.max_iter", "expected an integer");
      }
      cfg.tolerances.max_iter = t["max_iter"].get<int>();
    }
    if (cfg.tolerances.tol <= 0 || cfg.tolerances.tail <= 0 ||
        cfg.tolerances.max_iter < 1) {
      throw ValidationError("tolerances", "tolerances must be positive");
    }
  }

  std::optional<Tuning> atom_tuning;
  if (root.contains("tuning")) {
    const json& t = root["tuning"];
    if (!t.is_object()) throw ValidationError("tuning", "expected an object");
    reject_unknown_keys(t, "tuning", {"kappa", "alpha", "beta", "r"});
    const bool has_atom = t.contains("alpha") || t.contains("beta") || t.contains("r");
    if (has_atom) {
      if (!t.contains("alpha") || !t.contains("beta")) {
        throw ValidationError("tuning", "alpha and beta must be given together");
      }
      const Complex alpha = parse_complex(t["alpha"], "tuning.alpha");
      const Complex beta = parse_complex(t["beta"], "tuning.beta");
      const double r = t.contains("r") ? require_number(t["r"], "tuning.r") : 1.0;
      try {
        atom_tuning = Tuning::from_atom(alpha, beta, r);
      } catch (const Error& e) {
        throw ValidationError("tuning", e.what());
      }
      cfg.kappa = atom_tuning->kappa;
    }
    if (t.contains("kappa")) {
      const Complex kappa = parse_complex(t["kappa"], "tuning.kappa");
      if (atom_tuning &&
          std::abs(kappa - atom_tuning->kappa) > 1e-9 * (1.0 + std::abs(kappa))) {
        throw ValidationError("tuning",
                              "kappa disagrees with alpha/(beta r)");
      }
      cfg.kappa = kappa;
    }
  }

  if (root.contains("gamma")) {
    cfg.gamma = parse_complex(root["gamma"], "gamma");
  }

  if (root.contains("mixtures")) {
    const json& m = root["mixtures"];
    if (!m.is_object()) throw ValidationError("mixtures", "expected an object");
    for (const auto& [name, terms] : m.items()) {
      cfg.mixtures[name] = parse_mixture(terms, "mixtures." + name);
    }
  }

  if (root.contains("attenuation")) {
    const json& a = root["attenuation"];
    if (a.is_number()) {
      cfg.attenuation.push_back(a.get<double>());
    } else if (a.is_array() && !a.empty()) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        cfg.attenuation.push_back(
            require_number(a[i], "attenuation[" + std::to_string(i) + "]"));
      }
    } else {
      throw ValidationError("attenuation", "expected a number or an array");
    }
    for (const double a_value : cfg.attenuation) {
      if (a_value <= 0.0 || a_value > 1.0) {
        throw ValidationError("attenuation", "A must lie in (0, 1]");
      }
    }
  }

  if (root.contains("channel")) {
    if (cfg.scenario != Scenario::steady_state) {
      throw ValidationError("channel", "only used by the steady_state scenario");
    }
    try {
      cfg.channel = channel_spec_from_json(root["channel"]);
    } catch (const ParseError& e) {
      throw ValidationError("channel", e.what());
    }
  }

  if (root.contains("monte_carlo")) {
    if (cfg.scenario != Scenario::discriminate) {
      throw ValidationError("monte_carlo",
                            "only used by the discriminate scenario");
    }
    const json& mc = root["monte_carlo"];
    if (!mc.is_object()) throw ValidationError("monte_carlo", "expected an object");
    reject_unknown_keys(mc, "monte_carlo", {"n_samples", "seed"});
    MonteCarloSpec spec;
    if (mc.contains("n_samples")) {
      if (!mc["n_samples"].is_number_integer() || mc["n_samples"].get<std::int64_t>() < 1) {
        throw ValidationError("monte_carlo.n_samples", "expected a positive integer");
      }
      spec.n_samples = mc["n_samples"].get<std::int64_t>();
    }
    if (!mc.contains("seed")) {
      throw ValidationError("monte_carlo.seed",
                            "seed is mandatory for reproducibility");
    }
    if (!mc["seed"].is_number_integer()) {
      throw ValidationError("monte_carlo.seed", "expected an integer");
    }
    spec.seed = mc["seed"].get<std::uint64_t>();
    cfg.monte_carlo = spec;
  }

  // scenario-specific requirements
  const auto require_mixture = [&](const std::string& name) {
    if (cfg.mixtures.count(name) == 0) {
      throw ValidationError("mixtures." + name,
                            "required by the " + to_string(cfg.scenario) +
                                " scenario");
    }
  };
  switch (cfg.scenario) {
    case Scenario::clone:
      if (!cfg.gamma) throw ValidationError("gamma", "required by clone");
      if (!cfg.kappa) cfg.kappa = Complex{-1.0, 0.0};
      break;
    case Scenario::broadcast:
      require_mixture("input");
      if (!cfg.kappa) cfg.kappa = Complex{-1.0, 0.0};
      break;
    case Scenario::steady_state: {
      if (!cfg.channel) throw ValidationError("channel", "required by steady_state");
      if (cfg.channel->beta == Complex{0.0, 0.0}) {
        if (!atom_tuning) {
          throw ValidationError("channel",
                                "alpha and beta (or a tuning section) required");
        }
        cfg.channel->alpha = atom_tuning->alpha;
        cfg.channel->beta = atom_tuning->beta;
      }
      const Tuning t = Tuning::from_atom(cfg.channel->alpha, cfg.channel->beta,
                                         cfg.channel->config.r);
      if (cfg.kappa &&
          std::abs(*cfg.kappa - t.kappa) > 1e-9 * (1.0 + std::abs(t.kappa))) {
        throw ValidationError("tuning", "kappa disagrees with the channel atom");
      }
      cfg.kappa = t.kappa;
      if (!cfg.gamma && cfg.mixtures.count("input") == 0) {
        throw ValidationError("gamma", "steady_state needs gamma or mixtures.input");
      }
      break;
    }
    case Scenario::attenuate:
      require_mixture("rho");
      if (cfg.attenuation.empty()) {
        throw ValidationError("attenuation", "required by attenuate");
      }
      break;
    case Scenario::discriminate:
      require_mixture("rho");
      require_mixture("sigma");
      if (cfg.attenuation.size() != 1) {
        throw ValidationError("attenuation",
                              "discriminate needs exactly one A value");
      }
      if (!cfg.monte_carlo) {
        throw ValidationError("monte_carlo", "required by discriminate");
      }
      break;
  }

  // resolved config with all defaults materialized
  json resolved;
  resolved["scenario"] = to_string(cfg.scenario);
  resolved["n_max"] = cfg.n_max;
  resolved["tolerances"] = {{"tol", cfg.tolerances.tol},
                            {"tail", cfg.tolerances.tail},
                            {"max_iter", cfg.tolerances.max_iter}};
  if (cfg.kappa) resolved["tuning"] = {{"kappa", complex_json(*cfg.kappa)}};
  if (cfg.gamma) resolved["gamma"] = complex_json(*cfg.gamma);
  if (!cfg.mixtures.empty()) {
    json mixtures;
    for (const auto& [name, terms] : cfg.mixtures) {
      mixtures[name] = mixture_json(terms);
    }
    resolved["mixtures"] = std::move(mixtures);
  }
  if (!cfg.attenuation.empty()) resolved["attenuation"] = cfg.attenuation;
  if (cfg.channel) resolved["channel"] = to_json(*cfg.channel);
  if (cfg.monte_carlo) {
    resolved["monte_carlo"] = {{"n_samples", cfg.monte_carlo->n_samples},
                               {"seed", cfg.monte_carlo->seed}};
  }
  cfg.resolved = std::move(resolved);
  return cfg;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) {
    out << (i == 0 ? "" : ",") << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i == 0 ? "" : ",") << format_double(row[i]);
    }
    out << '\n';
  }
}

CoherentMixture mixture_from_config(const ScenarioConfig& cfg,
                                    const std::string& name) {
  try {
    return CoherentMixture(cfg.mixtures.at(name));
  } catch (const ValidationError& e) {
    throw ValidationError("mixtures." + name, e.what());
  }
}

// ---- scenario runners ----

struct ScenarioOutput {
  json report;
  bool physics_ok = true;
  std::string physics_message;
};

ScenarioOutput run_clone(const ScenarioConfig& cfg) {
  const Complex kappa = *cfg.kappa;
  const Complex gamma = *cfg.gamma;
  const double tail = cfg.tolerances.tail;
  const BeamSplitter bs = beam_splitter_for_kappa(kappa, cfg.n_max);

  double input_tail = 0.0;
  const Eigen::VectorXcd in_mode =
      coherent_vector(std::sqrt(2.0) * gamma, cfg.n_max, tail, &input_tail);
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(1);
  vac(0) = 1.0;
  const TwoModeVector output =
      apply(bs, product_vector(in_mode, vac, cfg.n_max, tail));

  const Eigen::VectorXcd clone_mode = coherent_vector(gamma, cfg.n_max, tail);
  const TwoModeVector clone_target =
      product_vector(clone_mode, clone_mode, cfg.n_max, tail);
  const double fidelity_clone = std::norm(overlap(clone_target, output));

  // image of the input under the cavity transformation, any kappa
  const double a = 1.0 / std::sqrt(1.0 + std::norm(kappa));
  const Complex g_in = std::sqrt(2.0) * gamma;
  const TwoModeVector transform_target = product_vector(
      coherent_vector(a * g_in, cfg.n_max, tail),
      coherent_vector(-kappa * a * g_in, cfg.n_max, tail), cfg.n_max, tail);
  const double fidelity_transform = std::norm(overlap(transform_target, output));

  ScenarioOutput out;
  out.report["fidelity_clone"] = fidelity_clone;
  out.report["fidelity_transform"] = fidelity_transform;
  out.report["input_tail"] = input_tail;
  if (fidelity_transform < 1.0 - 1e-8) {
    out.physics_ok = false;
    out.physics_message = "beam-splitter output disagrees with the closed form";
  }
  return out;
}

ScenarioOutput run_broadcast(const ScenarioConfig& cfg, const std::string& out_dir) {
  const CoherentMixture input = mixture_from_config(cfg, "input");
  auto [state, rep] = broadcast(input, *cfg.kappa, cfg.n_max, cfg.tolerances.tail);

  ScenarioOutput out;
  out.report["marginal_distance"] = rep.marginal_distance;
  out.report["marginals_equal"] = rep.marginal_distance <= cfg.tolerances.tol;
  out.report["target_distance1"] = rep.target_distance1;
  out.report["target_distance2"] = rep.target_distance2;
  out.report["crosscheck_distance"] = rep.crosscheck_distance;
  out.report["output_purity"] = rep.output_purity;
  out.report["is_clone_case"] =
      input.size() == 1 && rep.output_purity >= 1.0 - 1e-8;
  out.report["marginal1_photon_distribution"] =
      vector_json(rep.marginal1.photon_distribution());
  out.report["marginal2_photon_distribution"] =
      vector_json(rep.marginal2.photon_distribution());

  std::vector<std::vector<double>> rows;
  const Eigen::VectorXd p1 = rep.marginal1.photon_distribution();
  const Eigen::VectorXd p2 = rep.marginal2.photon_distribution();
  for (int n = 0; n <= cfg.n_max; ++n) {
    rows.push_back({static_cast<double>(n), p1(n), p2(n)});
  }
  write_csv(out_dir + "/series.csv", {"n", "marginal1", "marginal2"}, rows);

  if (rep.crosscheck_distance > std::max(1e-8, cfg.tolerances.tol)) {
    out.physics_ok = false;
    out.physics_message = "closed-form and numeric outputs disagree";
  }
  return out;
}

ScenarioOutput run_steady_state(const ScenarioConfig& cfg, const std::string& out_dir) {
  const ChannelSpec& spec = *cfg.channel;
  const RamanChannel channel =
      build_channel(spec.config, spec.alpha, spec.beta, cfg.n_max);

  TwoModeState rho0{FockCutoff{cfg.n_max}};
  if (cfg.gamma) {
    rho0 = pure_state(
        coherent_vacuum_vector(*cfg.gamma, cfg.n_max, cfg.tolerances.tail));
  } else {
    rho0 = mixture_state(mixture_from_config(cfg, "input"), cfg.n_max,
                         cfg.tolerances.tail);
  }

  std::vector<std::vector<double>> rows;
  const auto observer = [&rows](int iteration, const TwoModeState&, double d) {
    rows.push_back({static_cast<double>(iteration), d});
  };
  const SteadyStateResult result = iterate_to_steady(
      channel, rho0, cfg.tolerances.tol, cfg.tolerances.max_iter, observer);
  write_csv(out_dir + "/series.csv", {"iteration", "successive_distance"}, rows);

  ScenarioOutput out;
  out.report["converged"] = result.converged;
  out.report["iterations"] = result.iterations;
  out.report["final_distance"] = result.final_distance;
  out.report["kraus_completeness_error"] = channel.completeness_error();
  out.report["mean_total_photons_initial"] = expect_total_photons(rho0);
  out.report["mean_total_photons_final"] = expect_total_photons(result.state);

  if (cfg.gamma) {
    // analytic pure steady state seeded by the coherent input, and the
    // beam-splitter image of that input
    const Complex kappa = *cfg.kappa;
    const TwoModeVector analytic = analytic_steady_state(
        SteadyStateSpec{coherent_seed(*cfg.gamma, kappa, cfg.n_max), kappa},
        cfg.n_max);
    const TwoModeState analytic_rho = pure_state(analytic);
    out.report["iterate_vs_analytic_distance"] =
        trace_distance(result.state, analytic_rho);
    out.report["analytic_fixed_point_residual"] =
        trace_distance(apply_channel(channel, analytic_rho), analytic_rho);
    out.report["iterate_fidelity_with_analytic"] =
        fidelity_pure(analytic, result.state);
  }

  if (!result.converged) {
    out.physics_ok = false;
    out.physics_message = "iteration did not converge (NotConverged): last distance " +
                          format_double(result.final_distance);
  }
  return out;
}

ScenarioOutput run_attenuate(const ScenarioConfig& cfg, const std::string& out_dir) {
  const CoherentMixture rho = mixture_from_config(cfg, "rho");
  const bool has_sigma = cfg.mixtures.count("sigma") > 0;
  const MomentSummary ms_rho = moments(rho);

  ScenarioOutput out;
  json per_a = json::array();
  std::vector<std::vector<double>> rows;
  for (const double a_value : cfg.attenuation) {
    json entry;
    entry["A"] = a_value;
    const QubitState two_level = attenuate_two_level(ms_rho, a_value);
    entry["two_level_rho"] = {
        {"p0", two_level.matrix(0, 0).real()},
        {"p1", two_level.matrix(1, 1).real()},
        {"coherence", {two_level.matrix(1, 0).real(), two_level.matrix(1, 0).imag()}}};
    entry["two_level_purity"] = two_level.purity();

    const PurityCheck purity = purity_condition(ms_rho, a_value);
    entry["purity_condition"] = {{"satisfied", purity.satisfied},
                                 {"variance", purity.variance},
                                 {"threshold", purity.threshold}};

    const SingleModeState exact =
        attenuate_exact(rho, a_value, cfg.n_max, cfg.tolerances.tail);
    double max_diag_error = 0.0;
    for (int n = 0; n <= std::min(4, cfg.n_max); ++n) {
      max_diag_error = std::max(
          max_diag_error,
          std::abs(diagonal_term(rho, a_value, n) - exact.matrix(n, n).real()));
    }
    entry["diagonal_closed_form_error"] = max_diag_error;

    if (has_sigma) {
      const CoherentMixture sigma = mixture_from_config(cfg, "sigma");
      const Eigen::Vector2cd phi_rho = phi_state(ms_rho, a_value);
      const Eigen::Vector2cd phi_sigma = phi_state(moments(sigma), a_value);
      const PovmTriple povm = build_povm(phi_rho, phi_sigma);
      entry["s_overlap"] = povm.s_overlap;
      entry["pmax"] = povm.success_probability;
      entry["pmax_over_A2"] = povm.success_probability / (a_value * a_value);
      rows.push_back({a_value, povm.success_probability,
                      povm.success_probability / (a_value * a_value)});
    }
    per_a.push_back(std::move(entry));
  }
  out.report["sweep"] = std::move(per_a);
  out.report["moments_rho"] = {{"mean_gamma", complex_json(ms_rho.mean_gamma)},
                               {"mean_abs2", ms_rho.mean_abs2}};
  if (has_sigma) {
    write_csv(out_dir + "/series.csv", {"A", "pmax", "pmax_over_A2"}, rows);
  }
  return out;
}

ScenarioOutput run_discriminate(const ScenarioConfig& cfg) {
  const CoherentMixture rho = mixture_from_config(cfg, "rho");
  const CoherentMixture sigma = mixture_from_config(cfg, "sigma");

  DiscriminationOptions opts;
  opts.A = cfg.attenuation.front();
  opts.n_samples = cfg.monte_carlo->n_samples;
  opts.seed = cfg.monte_carlo->seed;
  opts.n_max = cfg.n_max;

  const PovmTriple povm = build_povm(phi_state(moments(rho), opts.A),
                                     phi_state(moments(sigma), opts.A));
  const DiscriminationReport rep = run_discrimination_experiment(rho, sigma, opts);

  ScenarioOutput out;
  out.report["seed"] = rep.seed;
  out.report["n_samples"] = rep.n_samples;
  out.report["counts"] = {{"rho", rep.count_rho},
                          {"sigma", rep.count_sigma},
                          {"inconclusive", rep.count_inconclusive},
                          {"errors", rep.count_errors}};
  out.report["analytic"] = {{"s", rep.s_overlap}, {"pmax", rep.pmax_analytic}};
  out.report["empirical"] = {
      {"success_rate", rep.empirical_success_rate},
      {"error_rate", rep.empirical_error_rate},
      {"inconclusive_rate", rep.empirical_inconclusive_rate}};
  out.report["purity_condition_ok"] = {{"rho", rep.purity_ok_rho},
                                       {"sigma", rep.purity_ok_sigma}};
  out.report["povm"] = {{"c_rho", povm.c_rho},
                        {"c_sigma", povm.c_sigma},
                        {"completeness_error", povm.completeness_error()},
                        {"min_eigenvalue", povm.min_eigenvalue()}};
  if (rep.count_errors != 0) {
    out.physics_ok = false;
    out.physics_message = "unambiguous measurement reported a wrong identification";
  }
  return out;
}

void emit_error(const std::string& type, const std::string& message) {
  json err;
  err["error"] = {{"type", type}, {"message", message}};
  std::cerr << err.dump() << std::endl;
}

}  // namespace

std::string to_string(Scenario s) {
  for (const auto& [name, value] : kScenarioNames) {
    if (value == s) return name;
  }
  return "unknown";
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("config", e.what());
  }
  return config_from_json(root);
}

nlohmann::json apply_overrides(nlohmann::json config,
                               const std::vector<std::string>& overrides) {
  for (const auto& entry : overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ValidationError("override", "expected key=value, got '" + entry + "'");
    }
    std::string path = "/" + entry.substr(0, eq);
    for (auto& c : path) {
      if (c == '.') c = '/';
    }
    const std::string raw = entry.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;  // plain string
    }
    try {
      config[nlohmann::json::json_pointer(path)] = value;
    } catch (const json::exception& e) {
      throw ValidationError("override", e.what());
    }
  }
  return config;
}

int run_scenario(const ScenarioConfig& cfg, const std::string& out_dir,
                 bool quiet) {
  try {
    std::filesystem::create_directories(out_dir);
    ScenarioOutput out;
    switch (cfg.scenario) {
      case Scenario::clone:
        out = run_clone(cfg);
        break;
      case Scenario::broadcast:
        out = run_broadcast(cfg, out_dir);
        break;
      case Scenario::steady_state:
        out = run_steady_state(cfg, out_dir);
        break;
      case Scenario::attenuate:
        out = run_attenuate(cfg, out_dir);
        break;
      case Scenario::discriminate:
        out = run_discriminate(cfg);
        break;
    }
    json report = std::move(out.report);
    report["schema_version"] = kSchemaVersion;
    report["scenario"] = to_string(cfg.scenario);
    report["config"] = cfg.resolved;
    report["generated_at"] = timestamp_utc();
    save_json(report, out_dir + "/report.json");
    if (!quiet) {
      std::cout << "wrote " << out_dir << "/report.json" << std::endl;
    }
    if (!out.physics_ok) {
      emit_error("PhysicsCheckFailed", out.physics_message);
      return kExitPhysicsFailure;
    }
    return kExitOk;
  } catch (const ParseError& e) {
    emit_error("ParseError", e.what());
    return kExitConfigError;
  } catch (const ValidationError& e) {
    emit_error("ValidationError", e.what());
    return kExitConfigError;
  } catch (const TailTooLarge& e) {
    emit_error("TailTooLarge", e.what());
    return kExitPhysicsFailure;
  } catch (const NotPositive& e) {
    emit_error("NotPositive", e.what());
    return kExitPhysicsFailure;
  } catch (const StatesIdentical& e) {
    emit_error("StatesIdentical", e.what());
    return kExitPhysicsFailure;
  } catch (const ZeroMeanAmplitude& e) {
    emit_error("ZeroMeanAmplitude", e.what());
    return kExitPhysicsFailure;
  } catch (const InvalidTruncation& e) {
    emit_error("InvalidTruncation", e.what());
    return kExitPhysicsFailure;
  } catch (const DegenerateAtom& e) {
    emit_error("DegenerateAtom", e.what());
    return kExitPhysicsFailure;
  } catch (const DegenerateSeed& e) {
    emit_error("DegenerateSeed", e.what());
    return kExitPhysicsFailure;
  } catch (const DimensionMismatch& e) {
    emit_error("DimensionMismatch", e.what());
    return kExitPhysicsFailure;
  } catch (const Error& e) {
    emit_error("Error", e.what());
    return kExitPhysicsFailure;
  } catch (const std::exception& e) {
    emit_error("InternalError", e.what());
    return kExitPhysicsFailure;
  }
}

int run_from_file(const std::string& config_path, const std::string& out_dir,
                  const std::vector<std::string>& overrides, bool quiet) {
  try {
    json root = load_json(config_path);
    root = apply_overrides(root, overrides);
    const ScenarioConfig cfg = config_from_json(root);
    return run_scenario(cfg, out_dir, quiet);
  } catch (const ParseError& e) {
    emit_error("ParseError", e.what());
    return kExitConfigError;
  } catch (const ValidationError& e) {
    emit_error("ValidationError", e.what());
    return kExitConfigError;
  } catch (const Error& e) {
    emit_error("Error", e.what());
    return kExitConfigError;
  }
}

}  // namespace qbsim::cli
