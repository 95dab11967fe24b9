#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Configuration-driven experiment runner: flat INI-style configs in,
// CSV/JSON/binary artifacts plus a reproducibility manifest out.

namespace sfnls {

/// Flat sectioned key-value config ("[section]" headers, "key = value"
/// lines, '#' comments). Unknown keys are rejected to catch typos.
struct ExperimentConfig {
  std::string experiment;

  // grid
  int dim = 1;
  double extent = 40.0;
  int points = 256;
  double alpha = 0.5;

  // model
  double sigma = 1.0;
  double gamma = 0.5;
  double beta = 0.0;
  std::string forcing = "zero";  // zero | linear_damping | damped_forced
  double g_amplitude = 1.0;
  double g_width = 1.0;

  // initial data (deterministic Gaussian bump)
  double init_amplitude = 1.0;
  double init_width = 2.0;

  // time
  double dt = 1e-3;
  double t_start = 0.0;
  double t_end = 1.0;
  std::int64_t stride = 100;

  // noise
  std::uint64_t seed = 42;
  int n_paths = 1;

  // attractor experiments
  double set_radius = 1.0;
  double growth_rate = 0.0;
  std::vector<double> t_schedule;
  std::vector<double> k_schedule;
  int n_samples = 16;
  double sigma0 = 0.0;

  // output
  std::string directory = "out";
  std::string formats = "csv,json";

  // pass/fail tolerance where the experiment has one knob
  double tolerance = 1e-9;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses a config file; throws ConfigError with a line diagnostic.
ExperimentConfig parse_config(const std::string& path);

/// Serializes a config in the same INI format (the manifest payload);
/// floats carry 17 significant digits so re-running a manifest is
/// bit-identical.
std::string render_config(const ExperimentConfig& config);

/// Runs one experiment: writes artifacts and the manifest into the output
/// directory and prints one PASS/FAIL line per check. Returns the process
/// exit code: 0 success, 2 parameter-regime rejection (with the validation
/// report), 3 runtime divergence.
int run_experiment(const ExperimentConfig& config);

/// Catalog of the ten experiments with their config blocks and the claim
/// each one exercises; stable across runs.
std::string list_experiments();

}  // namespace sfnls
