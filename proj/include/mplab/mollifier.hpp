#pragma once

#include <utility>
#include <vector>

#include "mplab/grid.hpp"
#include "mplab/measure.hpp"

namespace mplab {

enum class MollifierProfile { bump, cosine };

/// Discrete mollifier rho_n with support radius 1/n, sampled on an odd
/// stencil of node radius ceil(1/(n h)) and renormalized so that
/// h^2 sum weights = 1 exactly.  The continuum normalization c (from the
/// radial quadrature) is kept for reporting; the discrete correction to it
/// is O(h^2).
class MollifierKernel {
public:
  static MollifierKernel build(int n, const Grid& g,
                               MollifierProfile profile = MollifierProfile::bump);

  int smoothing_index() const { return n_; }
  int stencil_radius() const { return radius_; }
  double support_radius() const { return 1.0 / n_; }
  double continuum_normalization() const { return c_; }
  double discrete_mass(const Grid& g) const;  // h^2 sum weights
  MollifierProfile profile() const { return profile_; }

  double weight(int di, int dj) const {
    const int K = radius_;
    return weights_[static_cast<std::size_t>(di + K) * (2 * K + 1) + (dj + K)];
  }
  const std::vector<double>& weights() const { return weights_; }

private:
  MollifierKernel() = default;
  int n_ = 0;
  int radius_ = 0;
  double c_ = 0.0;
  MollifierProfile profile_ = MollifierProfile::bump;
  std::vector<double> weights_;  // (2K+1)^2, row-major in di
};

/// Discrete convolution of a node field with the kernel; kernels reaching
/// past the boundary are truncated without renormalization, so mass may
/// leak for data within 1/n of the boundary.
GridFunction mollify_field(const GridFunction& rhs, const MollifierKernel& k);

/// R_n(m) as a pure-density measure: convolution of discretize_rhs(m).
Measure mollify_measure(const Measure& m, const MollifierKernel& k, const Grid& g);

/// Mollified values of u at node (i,j) for consecutive smoothing indices
/// (v_n, v_{n+1}); requires dist to boundary >= 1/n.  For a discretely
/// superharmonic u the chain v_n <= v_{n+1} <= u(i,j) holds up to O(h^2).
std::pair<double, double> check_superharmonic_monotonicity(const GridFunction& u, int i, int j,
                                                           int n,
                                                           MollifierProfile profile =
                                                               MollifierProfile::bump);

struct DominationReport {
  double c_est = 0.0;
  bool holds = true;
};

/// Max nodewise ratio G_h(R_n m) / G_h(m) for positive compactly supported
/// m; holds iff c_est <= 1 + tol.  m = 0 returns holds by convention.
DominationReport check_green_domination(const Measure& m, int n, double tol = 5e-2);

/// Default smoothing schedule start: 1/n0 = quarter of the least distance
/// from the atoms to the boundary (8 when no atoms are present).
int default_mollification_start(const Measure& m);

}  // namespace mplab
