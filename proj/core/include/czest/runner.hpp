#ifndef CZEST_RUNNER_HPP_
#define CZEST_RUNNER_HPP_

#include <string>
#include <vector>

#include "czest/simulate.hpp"
#include "czest/systems.hpp"

namespace czest {

struct RunConfig {
  std::string system;
  int steps = -1;                // -1: system default
  uint64_t seed = 1;
  Eigen::Index gen_limit = -1;   // -1: system default
  Eigen::Index con_limit = -1;   // -1: system default
  std::string out_path;          // empty: no CSV written
  NoiseMode noise_mode = NoiseMode::kUniform;
  double ts = 0.0;               // 0: system default
};

struct StepRecord {
  int k = 0;
  double hull_volume_root = 0.0;  // (prod of hull widths)^(1/n_x)
  Eigen::Index n_g = 0;
  Eigen::Index n_c = 0;
  bool contains_truth = false;
  double step_millis = 0.0;
};

struct RunResult {
  std::vector<StepRecord> records;
  int violations = 0;  // rows with contains_truth false
};

/// Parses a flat key=value config file ('#' starts a comment). Unknown keys
/// throw ConfigError.
RunConfig load_config_file(const std::string& path);

/// Applies one key=value assignment to a config. Throws ConfigError.
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

/// Simulates the ground truth, runs the estimator over the horizon, checks
/// containment of the true state at every step, and optionally writes the
/// CSV. Deterministic for a fixed config (modulo the step_millis column).
RunResult run(const RunConfig& config);

std::string to_csv(const std::vector<StepRecord>& records);

}  // namespace czest

#endif
