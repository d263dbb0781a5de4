#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mplab/grid.hpp"
#include "mplab/measure.hpp"
#include "mplab/mollifier.hpp"
#include "mplab/nonlinearity.hpp"
#include "mplab/reduction.hpp"

namespace mplab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid-independent measure description; instantiated per ladder grid.
struct MeasureSpec {
  enum class DensityKind { zero, constant, expression, grid_values, file };
  DensityKind kind = DensityKind::zero;
  double constant = 0.0;
  std::string expression;                   // variables x, y
  std::vector<std::vector<double>> values;  // grid_values (n rows of n)
  std::filesystem::path file;               // CSV read against each grid
  std::vector<Atom> atoms;

  Measure instantiate(const Grid& g) const;
};

struct FSpec {
  std::string family = "zero";  // zero | linear | power | exp | custom
  double p = 3.0;
  double a = 1.0;
  std::string expression;  // variables x, y (position), u (value)

  Nonlinearity instantiate() const;
};

/// Single-JSON-file experiment configuration; no environment variables are
/// consulted except the output directory override on the command line.
struct ExperimentConfig {
  FSpec f;
  MeasureSpec measure;
  Rect bounds;
  std::vector<int> grids = {63};
  std::string scheme = "truncation";  // truncation | mollification | both
  double q = 1.2;
  MollifierProfile mollifier_profile = MollifierProfile::bump;
  ReductionOptions reduction;
  double cauchy_tol = 0.02;
  double divergence_threshold = 0.1;
  double richardson_beta_min = 0.3;
  double richardson_beta_max = 2.0;
  unsigned seed = 20240601;  // randomized corpus rows in verify
  std::filesystem::path out = "out";

  std::string canonical_json() const;  // for the provenance hash

  static ExperimentConfig from_file(const std::filesystem::path& path);
  static ExperimentConfig from_json_text(const std::string& text,
                                         const std::filesystem::path& base_dir);
};

}  // namespace mplab
