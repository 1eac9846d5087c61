#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace gibbswave {

// Raised for malformed or out-of-contract configuration (CLI exit code 1).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised on numerical aborts: nonfinite states, rejection-cap hits,
// non-contracting Picard iterations, failed Gram checks (CLI exit code 2).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key-value run configuration.  Parsed from "key = value" lines ('#'
// comments, blank lines allowed); unknown keys are errors, as are values of
// the wrong shape.  Validation enforces alpha in (0,3) and
// max(4,2alpha) < p < 6.
struct Config {
  double alpha = 2.0;
  double p = 5.0;
  double s = 0.4;
  int n_modes = 64;
  int n_quad = 0;  // 0 = default order
  double dt = 1e-3;
  double t_final = 1.0;
  int record_every = 100;
  int n_ensemble = 2000;
  int n_samples = 10000;
  int n_trials = 500;
  int t_nodes = 64;
  int min_count = 30;
  int q_max = 16;
  std::string measure = "gibbs";  // gibbs | gaussian
  std::vector<int> n_list = {32, 64, 128};
  int n_ref = 256;
  std::vector<int> partition_n_list = {8, 16, 32, 64};
  int observe_spacetime = 0;  // cmd_evolve: add the space-time L^p observer
  int dt_refine = 1;          // cmd_invariance: rerun at dt/2
  int nonlinear = 1;          // 0 = free rotation only (linear control runs)
  int workers = 0;            // worker threads; 0 = available cores

  static Config parse_file(const std::filesystem::path& path);
  static Config parse_string(const std::string& text);

  // Throws config_error citing the violated constraint.
  void validate() const;

  // sigma = 3/2 - 4/p (the Sobolev index paired with the space-time L^p norm)
  double sigma() const { return 1.5 - 4.0 / p; }

  // Key-value view of every setting, in key order (manifest snapshot).
  std::map<std::string, std::string> snapshot() const;
};

}  // namespace gibbswave
