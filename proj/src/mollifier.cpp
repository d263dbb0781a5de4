#include "mplab/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mplab/green.hpp"

namespace mplab {

namespace {

double profile_value(MollifierProfile p, double r) {
  if (r >= 1.0) return 0.0;
  switch (p) {
    case MollifierProfile::bump:
      return std::exp(-1.0 / (1.0 - r * r));
    case MollifierProfile::cosine:
      return 1.0 + std::cos(3.14159265358979323846 * r);
  }
  return 0.0;
}

}  // namespace

MollifierKernel MollifierKernel::build(int n, const Grid& g, MollifierProfile profile) {
  if (n < 1) throw std::invalid_argument("MollifierKernel: n must be >= 1");
  const double h = g.h();
  if (1.0 / n < 2.0 * h - 1e-12)
    throw std::invalid_argument("MollifierKernel: kernel narrower than 2 cells (1/n < 2h), n=" +
                                std::to_string(n));
  MollifierKernel k;
  k.n_ = n;
  k.profile_ = profile;
  k.radius_ = static_cast<int>(std::ceil(1.0 / (n * h)));

  // continuum normalization: c = 1 / int_0^1 j(r) alpha_2(r) dr, alpha_2 = 2 pi r
  const int quad = 4096;
  double integral = 0.0;
  for (int q = 0; q < quad; ++q) {
    const double r = (q + 0.5) / quad;
    integral += profile_value(profile, r) * 2.0 * 3.14159265358979323846 * r;
  }
  integral /= quad;
  k.c_ = 1.0 / integral;

  const int K = k.radius_;
  k.weights_.assign(static_cast<std::size_t>(2 * K + 1) * (2 * K + 1), 0.0);
  double mass = 0.0;
  for (int di = -K; di <= K; ++di) {
    for (int dj = -K; dj <= K; ++dj) {
      const double r = std::hypot(di * h, dj * h) * n;
      const double w = k.c_ * n * n * profile_value(profile, r);
      k.weights_[static_cast<std::size_t>(di + K) * (2 * K + 1) + (dj + K)] = w;
      mass += w;
    }
  }
  mass *= h * h;
  if (mass <= 0.0) throw std::invalid_argument("MollifierKernel: empty kernel");
  for (double& w : k.weights_) w /= mass;  // exact unit discrete mass
  return k;
}

double MollifierKernel::discrete_mass(const Grid& g) const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s * g.h() * g.h();
}

GridFunction mollify_field(const GridFunction& rhs, const MollifierKernel& k) {
  const Grid& g = rhs.grid();
  const int n = g.n();
  const int K = k.stencil_radius();
  const double h2 = g.h() * g.h();
  GridFunction out(g);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      const int di_lo = std::max(-K, -i), di_hi = std::min(K, n - 1 - i);
      const int dj_lo = std::max(-K, -j), dj_hi = std::min(K, n - 1 - j);
      for (int di = di_lo; di <= di_hi; ++di)
        for (int dj = dj_lo; dj <= dj_hi; ++dj)
          s += k.weight(di, dj) * rhs.at(i + di, j + dj);
      out.at(i, j) = s * h2;
    }
  }
  return out;
}

Measure mollify_measure(const Measure& m, const MollifierKernel& k, const Grid& g) {
  require_same_grid(m.grid(), g, "mollify_measure");
  return Measure::density_only(mollify_field(discretize_rhs(m), k));
}

std::pair<double, double> check_superharmonic_monotonicity(const GridFunction& u, int i, int j,
                                                           int n, MollifierProfile profile) {
  const Grid& g = u.grid();
  if (g.boundary_distance(i, j) < 1.0 / n)
    throw std::invalid_argument("check_superharmonic_monotonicity: node too close to boundary");
  MollifierKernel ka = MollifierKernel::build(n, g, profile);
  MollifierKernel kb = MollifierKernel::build(n + 1, g, profile);
  const int nn = g.n();
  auto mollified_at = [&](const MollifierKernel& k) {
    const int K = k.stencil_radius();
    double s = 0.0;
    for (int di = std::max(-K, -i); di <= std::min(K, nn - 1 - i); ++di)
      for (int dj = std::max(-K, -j); dj <= std::min(K, nn - 1 - j); ++dj)
        s += k.weight(di, dj) * u.at(i + di, j + dj);
    return s * g.h() * g.h();
  };
  return {mollified_at(ka), mollified_at(kb)};
}

DominationReport check_green_domination(const Measure& m, int n, double tol) {
  const auto [pos, neg] = jordan_decompose(m);
  if (total_variation(neg) > 0.0)
    throw std::invalid_argument("check_green_domination: measure must be positive");
  DominationReport rep;
  if (total_variation(m) == 0.0) {
    rep.c_est = 0.0;
    rep.holds = true;  // by convention for m = 0
    return rep;
  }
  const Grid& g = m.grid();
  MollifierKernel k = MollifierKernel::build(n, g);
  GridFunction Gm = green_apply(m);
  GridFunction GRm = poisson_operator(g)->solve(mollify_field(discretize_rhs(m), k));
  double c = 0.0;
  const double floor = 1e-12 * linf_norm(Gm);
  for (std::size_t idx = 0; idx < Gm.values().size(); ++idx)
    if (Gm[idx] > floor) c = std::max(c, GRm[idx] / Gm[idx]);
  rep.c_est = c;
  rep.holds = c <= 1.0 + tol;
  return rep;
}

int default_mollification_start(const Measure& m) {
  if (m.atoms().empty()) return 8;
  const Rect& b = m.grid().bounds();
  double dist = std::min(b.x_max - b.x_min, b.y_max - b.y_min);
  for (const Atom& a : m.atoms()) {
    dist = std::min({dist, a.x - b.x_min, b.x_max - a.x, a.y - b.y_min, b.y_max - a.y});
  }
  return std::max(2, static_cast<int>(std::ceil(4.0 / dist)));
}

}  // namespace mplab
