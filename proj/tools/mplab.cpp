// mplab: numerical laboratory for the Dirichlet problem
//   -Delta u = f(., u) + mu
// with bounded-measure data: mollified approximations, reduced measures and
// the metric projection onto the good measures.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "mplab/config.hpp"
#include "mplab/study.hpp"

namespace {

mplab::ExperimentConfig load(const std::string& config_path, const std::string& out_override) {
  mplab::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = mplab::ExperimentConfig::from_file(config_path);
  if (!out_override.empty()) cfg.out = out_override;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mplab: semilinear Dirichlet problems with measure data"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  int jobs = 1;
  app.add_option("--config", config_path, "experiment config (JSON)");
  app.add_option("--out", out_override, "output directory override");
  app.add_option("--jobs", jobs, "worker pool size")->check(CLI::PositiveNumber);

  auto* cmd_solve = app.add_subcommand("solve", "solve -Delta u = f(.,u) + mu per grid");
  auto* cmd_reduce = app.add_subcommand("reduce", "truncation/mollification reduction ladders");
  auto* cmd_project = app.add_subcommand("project", "metric projection onto good measures");
  auto* cmd_adm = app.add_subcommand("admissible", "admissibility of mu for f over a grid ladder");
  auto* cmd_sweep = app.add_subcommand("sweep", "two-scheme study with extrapolation");
  auto* cmd_verify = app.add_subcommand("verify", "built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  try {
    mplab::ExperimentConfig cfg = load(config_path, out_override);
    if (cmd_solve->parsed()) return mplab::run_solve(cfg, jobs);
    if (cmd_reduce->parsed()) return mplab::run_reduce(cfg, jobs);
    if (cmd_project->parsed()) return mplab::run_project(cfg, jobs);
    if (cmd_adm->parsed()) return mplab::run_admissible(cfg, jobs);
    if (cmd_sweep->parsed()) return mplab::run_sweep(cfg, jobs);
    if (cmd_verify->parsed()) return mplab::run_verify(cfg, jobs);
  } catch (const mplab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
