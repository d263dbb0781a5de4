#pragma once

#include <span>

namespace mplab {

struct RichardsonFit {
  double a0 = 0.0;    // extrapolated value
  double c = 0.0;     // correction amplitude
  double beta = 0.0;  // fitted order
  double residual = 0.0;
};

/// Least-squares fit of a(h) = a0 + c h^beta with beta free in
/// [beta_min, beta_max] (scanned on a fixed lattice, deterministic).
/// The convergence order near a log singularity is not known a priori,
/// hence the free exponent.
RichardsonFit richardson_fit(std::span<const double> h, std::span<const double> a,
                             double beta_min = 0.3, double beta_max = 2.0);

}  // namespace mplab
