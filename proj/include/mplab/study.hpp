#pragma once

#include <string>

#include "mplab/config.hpp"

namespace mplab {

/// Experiment pipelines behind the CLI subcommands.  Each writes
/// report.json (plus CSV solutions, extracted-measure JSON, trace.csv and
/// plots/*.svg as applicable) under cfg.out and prints a short summary.
/// Returns the process exit code: 0 ok, 1 non-convergence or failed
/// invariant, 2 config error (thrown as ConfigError by the caller's
/// parsing stage).
int run_solve(const ExperimentConfig& cfg, int jobs);
int run_reduce(const ExperimentConfig& cfg, int jobs);
int run_project(const ExperimentConfig& cfg, int jobs);
int run_admissible(const ExperimentConfig& cfg, int jobs);
int run_sweep(const ExperimentConfig& cfg, int jobs);

/// Built-in invariant corpus (documented in the README); one pass/fail row
/// per property.  cfg supplies tolerances, the seed and the output
/// directory; the corpus itself is fixed.
int run_verify(const ExperimentConfig& cfg, int jobs);

}  // namespace mplab
