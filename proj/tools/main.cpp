// Experiment runner CLI: `sfnls run <config>` executes one INI config,
// `sfnls list` prints the experiment catalog. Exit codes: 0 success,
// 1 config parse error, 2 parameter-regime rejection, 3 runtime divergence.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sfnls/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spectral simulator for a damped stochastic fractional NLS"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run one experiment from a config file");
  run->add_option("config", config_path, "INI-style config file")->required();
  auto* list = app.add_subcommand("list", "print the experiment catalog");

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    std::cout << sfnls::list_experiments();
    return 0;
  }

  try {
    sfnls::ExperimentConfig config = sfnls::parse_config(config_path);
    return sfnls::run_experiment(config);
  } catch (const sfnls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }
}
