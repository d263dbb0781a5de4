#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mplab/grid.hpp"
#include "mplab/measure.hpp"
#include "mplab/nonlinearity.hpp"

namespace mplab {

/// Direct factorization of -Delta_h on a grid (zero Dirichlet data).
/// Instances are immutable after construction; solve() is safe for
/// concurrent readers.
class PoissonOperator {
public:
  explicit PoissonOperator(const Grid& g);
  ~PoissonOperator();
  PoissonOperator(PoissonOperator&&) noexcept;
  PoissonOperator& operator=(PoissonOperator&&) noexcept;

  const Grid& grid() const { return grid_; }

  /// Solves -Delta_h u = rhs; throws SolveError when the factorization or
  /// the residual check fails.
  GridFunction solve(const GridFunction& rhs) const;

  /// Factor of -Delta_h + diag(d), d >= 0 entrywise (M-matrix).
  GridFunction solve_shifted(const GridFunction& rhs, const GridFunction& diag) const;

  struct Impl;

private:
  Grid grid_;
  std::unique_ptr<Impl> impl_;
};

struct SolveError : std::runtime_error {
  explicit SolveError(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

/// Read-mostly cache of Poisson factorizations keyed by grid; safe under
/// concurrent readers.
std::shared_ptr<const PoissonOperator> poisson_operator(const Grid& g);

/// G_h m: solves -Delta_h u = discretize_rhs(m).
GridFunction green_apply(const Measure& m);
GridFunction green_apply(const Measure& m, const Grid& g);

/// l1 norm of u - G_h(f(.,u)) - G_h(m).
double green_representation_residual(const GridFunction& u, const Nonlinearity& f,
                                     const Measure& m);

struct LogFit {
  double coefficient = 0.0;  // A in u ~ A log(1/r) + B
  double intercept = 0.0;
  int points = 0;
};

/// Least-squares fit of u ~ A log(1/|x-c|) + B over nodes with
/// |x-c| in [r_min, r_max].
LogFit fit_log_coefficient(const GridFunction& u, double cx, double cy, double r_min,
                           double r_max);

enum class Admissibility { admissible, not_admissible, inconclusive };

struct AdmissibilityVerdict {
  std::vector<int> ladder;            // grid sizes n
  std::vector<double> h;              // spacings
  std::vector<double> integral;       // I_h = h^2 sum |f(., G_h m)|
  std::vector<double> rel_increment;  // |I_{k+1}-I_k| / |I_{k+1}|
  double growth_exponent = 0.0;       // LS slope of log I_h vs log(1/h)
  double cauchy_tol = 0.02;
  double divergence_threshold = 0.1;
  Admissibility verdict = Admissibility::inconclusive;
};

std::string to_string(Admissibility v);

/// Builds the measure on each ladder grid via the factory, computes I_h,
/// fits the growth exponent and decides:
///   admissible      iff every relative increment < cauchy_tol and the
///                    exponent stays below the divergence threshold,
///   not_admissible  iff the exponent exceeds the divergence threshold,
///   inconclusive    otherwise.
AdmissibilityVerdict admissibility_check(
    const Nonlinearity& f, const std::function<Measure(const Grid&)>& measure_on,
    std::span<const int> ladder, double cauchy_tol = 0.02, double divergence_threshold = 0.1);

}  // namespace mplab
