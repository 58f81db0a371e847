#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plap/config.hpp"

namespace plap {

// Result of a config-driven run. Gate failures are reported rather than
// thrown so callers can still inspect the written artifacts.
struct ExperimentOutcome {
  std::string experiment;
  std::string output_dir;
  bool gates_passed = true;
  std::vector<std::string> gate_failures;
};

// Dispatches on the `experiment` key: simulate, sweep_n, sweep_tau, p_sweep,
// dimension or verify. Validates every field before computing, writes all
// artifacts plus a manifest under the output directory (PLAP_OUTPUT_DIR
// overrides the config's output_dir), and evaluates the optional [gate]
// section.
ExperimentOutcome run_config(const Config& config);
ExperimentOutcome run_config_file(const std::string& path);

// The built-in `verify` experiment: runs the invariant suite, writes
// invariants.txt / invariants.csv / manifest.txt.
ExperimentOutcome run_verify(std::uint64_t seed, const std::string& output_dir);

}  // namespace plap
