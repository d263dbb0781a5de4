#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "mplab/grid.hpp"
#include "mplab/measure.hpp"
#include "mplab/nonlinearity.hpp"

namespace mplab {

struct SolveOptions {
  double tol_factor = 1e-8;   // tol_abs = tol_factor * (1 + linf(mu_h))
  int max_newton = 120;
  int max_line_search = 45;
  /// Keep iterating past the tolerance until the residual stagnates; needed
  /// for the 1e-10-grade comparison checks.
  bool tighten = true;
  bool certify = true;  // sampled monotonicity check before solving
  double q = 1.2;       // exponent for the reported W^{1,q} norm
  const GridFunction* warm_start = nullptr;
};

struct NormTable {
  double l1 = 0.0;
  double linf = 0.0;
  double w1q = 0.0;
  double f_l1 = 0.0;  // l1 of f(., u)
  double q = 0.0;
};

struct SolveReport {
  GridFunction u;
  int newton_iters = 0;
  double final_residual = 0.0;  // linf of -Delta_h u - f(.,u) - mu_h
  bool converged = false;
  NormTable norms;
};

struct MonotonicityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

/// Damped Newton for -Delta_h u = f(.,u) + mu_h.  The Jacobian
/// -Delta_h - diag(d_y f) stays an M-matrix because d_y f <= 0; a nonlinear
/// Gauss-Seidel sweep backs the line search up when Newton stalls.
SolveReport solve(const Nonlinearity& f, const Measure& m, const Grid& g,
                  const SolveOptions& opts = {});
SolveReport solve(const Nonlinearity& f, const Measure& m, const SolveOptions& opts = {});

/// -Delta_h u - f(.,u) - mu_h <= tol at every node (>= -tol for the
/// supersolution variant).  tol < 0 picks 100 * tol_factor * (1 + linf(mu_h)).
bool verify_subsolution(const GridFunction& u, const Nonlinearity& f, const Measure& m,
                        double tol = -1.0);
bool verify_supersolution(const GridFunction& u, const Nonlinearity& f, const Measure& m,
                          double tol = -1.0);

/// Solves both problems and checks u1 <= u2 + 1e-10 nodewise.  Requires
/// m1 <= m2 (discretized, and atomwise) and f1 <= f2 on samples.
bool check_comparison(const Nonlinearity& f1, const Measure& m1, const Nonlinearity& f2,
                      const Measure& m2, double slack = 1e-10);

struct AprioriData {
  double lhs = 0.0;  // w1q(u) + l1(f(.,u))
  double rhs = 0.0;  // l1(f(.,0)) + TV(m)
  double w1q = 0.0;
  double f_l1 = 0.0;
  double f0_l1 = 0.0;
  double tv = 0.0;
};

AprioriData check_apriori_bound(const SolveReport& report, const Nonlinearity& f,
                                const Measure& m, double q);

}  // namespace mplab
