#pragma once

#include <string>
#include <vector>

#include "mplab/measure.hpp"
#include "mplab/mollifier.hpp"
#include "mplab/semilinear.hpp"

namespace mplab {

enum class Scheme { truncation, mollification };

struct TraceRow {
  int level = 0;           // ladder position
  double parameter = 0.0;  // truncation height or smoothing index (0 = raw data)
  double l1_increment = 0.0;
  double atom_mass_estimate = 0.0;  // first atom, 0 when no atoms
  double l1_norm = 0.0;
  int newton_iters = 0;
};

struct ReductionResult {
  GridFunction u_star;
  Measure extracted;
  std::vector<TraceRow> trace;
  Scheme scheme = Scheme::truncation;
  bool converged = false;
  double tol_seq = 0.0;  // absolute sequence tolerance used
};

struct ReductionOptions {
  double tol_seq_rel_truncation = 1e-4;    // relative to the first iterate's l1 norm
  double tol_seq_rel_mollification = 5e-3;
  int max_truncation_levels = 44;          // heights 2^0 .. 2^43
  int mollification_start = 0;             // 0 = derive from atom support
  SolveOptions solver;
};

struct NonConvergedSequence : std::runtime_error {
  explicit NonConvergedSequence(const std::string& what, std::vector<TraceRow> trace)
      : std::runtime_error(what), trace(std::move(trace)) {}
  std::vector<TraceRow> trace;
};

/// Reads the driving measure off the discrete residual of a limit solution.
/// Around each original atom node, every node of the disk patch of radius
/// max(h, 0.3 sqrt(h)) contributes h^2 (-Delta_h u*) to that atom's mass --
/// the absorption inside the patch is the locally swallowed (reduced) part.
/// Off-patch nodes carry the density -Delta_h u* - f(., u*).
Measure extract_measure(const GridFunction& u_star, const Nonlinearity& f,
                        const std::vector<Atom>& original_atoms);

/// Patch radius used by extract_measure.
double extraction_patch_radius(const Grid& g);

/// Solves with f v (-2^j) for j = 0, 1, ... (warm-started), until the
/// truncation is inactive on the grid and the l1 increments fall under
/// tol_seq.  For m >= 0 the iterates are nonincreasing.
ReductionResult reduce_by_truncation(const Nonlinearity& f, const Measure& m,
                                     const ReductionOptions& opts = {});

/// Solves with R_{n_k}(m) for n_k = n0 2^k while 1/n_k >= 2h, then one more
/// level with the raw discretized measure (the sub-cell kernels act as the
/// identity on the lattice).  u_star is the last iterate.
ReductionResult reduce_by_mollification(const Nonlinearity& f, const Measure& m,
                                        const ReductionOptions& opts = {});

/// Pi_f(m) = reduction of m^+ under f minus reduction of m^- under the
/// reflection -f(x,-y).
Measure project(const Nonlinearity& f, const Measure& m, const ReductionOptions& opts = {});

/// Cross-check route: m^+ under -f^- and m^- under reflect(f^+).
Measure project_variant(const Nonlinearity& f, const Measure& m,
                        const ReductionOptions& opts = {});

struct IdentityRow {
  std::string name;
  double discrepancy = 0.0;  // TV distance between the two sides
  double threshold = 0.0;
  bool pass = false;
};

struct IdentityReport {
  std::vector<IdentityRow> rows;
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

/// For m >= 0: (mu+)* = (mu*)+, (mu_c)* = (mu*)_c, (mu*)_d = mu_d and
/// |mu*| <= |mu|, each within 3 tol_seq plus the mesoscale quadrature
/// tolerance 0.02 max(1, TV(m)).
IdentityReport check_reduction_identities(const Nonlinearity& f, const Measure& m,
                                          const ReductionOptions& opts = {});

/// TV distance between the reduced measures under f1 and f2
/// (|f1 - f2| bounded => equal reductions).
double lemma31_invariance(const Nonlinearity& f1, const Nonlinearity& f2, const Measure& m,
                          const ReductionOptions& opts = {});

}  // namespace mplab
