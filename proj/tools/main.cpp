#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbsim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Two-mode cavity quantum optics simulator"};

  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  bool quiet = false;

  app.add_option("--config", config_path, "Path to the scenario config (JSON)")
      ->required();
  app.add_option("--out", out_dir, "Output directory for report.json/series.csv");
  app.add_option("--override", overrides,
                 "Override a config entry, key=value with dotted paths "
                 "(repeatable)");
  app.add_flag("--quiet", quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : qbsim::cli::kExitConfigError;
  }

  return qbsim::cli::run_from_file(config_path, out_dir, overrides, quiet);
}
