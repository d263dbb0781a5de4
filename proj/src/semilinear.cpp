#include "mplab/semilinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mplab/green.hpp"

namespace mplab {

namespace {

void eval_f(const Nonlinearity& f, const Grid& g, const GridFunction& u, GridFunction& out) {
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) out.at(i, j) = f(g.x(i), g.y(j), u.at(i, j));
}

// residual of the strong form: rhs + f(.,u) - (-Delta_h u)
double residual(const Grid& g, const Nonlinearity& f, const GridFunction& rhs,
                const GridFunction& u, GridFunction& r) {
  GridFunction lap = laplacian_apply(u);
  double rn = 0.0;
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const double v = rhs.at(i, j) + f(g.x(i), g.y(j), u.at(i, j)) - lap.at(i, j);
      r.at(i, j) = v;
      rn = std::max(rn, std::abs(v));
    }
  }
  return rn;
}

// one nonlinear Gauss-Seidel sweep: per node, the scalar monotone equation
// (4/h^2) u_i - s_i/h^2 = f_i(u_i) + b_i has a unique root
void gauss_seidel_sweep(const Grid& g, const Nonlinearity& f, const GridFunction& rhs,
                        GridFunction& u) {
  const int n = g.n();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double nb = 0.0;
      if (i > 0) nb += u.at(i - 1, j);
      if (i < n - 1) nb += u.at(i + 1, j);
      if (j > 0) nb += u.at(i, j - 1);
      if (j < n - 1) nb += u.at(i, j + 1);
      const double px = g.x(i), py = g.y(j), b = rhs.at(i, j);
      // scalar root of  phi(t) = 4 inv_h2 t - inv_h2 nb - f(t) - b,
      // phi increasing; safeguarded Newton with bisection bracket
      double t = u.at(i, j);
      double lo = t, hi = t;
      auto phi = [&](double s) { return 4.0 * inv_h2 * s - inv_h2 * nb - f(px, py, s) - b; };
      double step = std::max(1.0, std::abs(t));
      while (phi(lo) > 0.0) { lo -= step; step *= 2.0; }
      step = std::max(1.0, std::abs(t));
      while (phi(hi) < 0.0) { hi += step; step *= 2.0; }
      for (int it = 0; it < 60; ++it) {
        const double dphi = 4.0 * inv_h2 - f.dv(px, py, t);
        double tn = t - phi(t) / dphi;
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        if (phi(tn) > 0.0) hi = tn; else lo = tn;
        if (std::abs(tn - t) < 1e-14 * std::max(1.0, std::abs(tn))) { t = tn; break; }
        t = tn;
      }
      u.at(i, j) = t;
    }
  }
}

}  // namespace

SolveReport solve(const Nonlinearity& f, const Measure& m, const Grid& g,
                  const SolveOptions& opts) {
  require_same_grid(m.grid(), g, "solve");
  return solve(f, m, opts);
}

SolveReport solve(const Nonlinearity& f, const Measure& m, const SolveOptions& opts) {
  const Grid& g = m.grid();
  if (opts.certify) {
    auto cert = f.certify(g);
    if (!cert.monotone_ok)
      throw MonotonicityError("solve: f increases in y on samples (violation " +
                              std::to_string(cert.max_monotonicity_violation) + ")");
  }
  const GridFunction rhs = discretize_rhs(m);
  const double tol = opts.tol_factor * (1.0 + linf_norm(rhs));

  GridFunction u = opts.warm_start ? *opts.warm_start : GridFunction(g);
  if (opts.warm_start) require_same_grid(opts.warm_start->grid(), g, "solve warm start");

  auto op = poisson_operator(g);
  GridFunction r(g), diag(g), trial(g);
  double rn = residual(g, f, rhs, u, r);
  double best = rn;
  int stagnant = 0;
  int it = 0;
  for (; it < opts.max_newton; ++it) {
    if (rn <= tol && (!opts.tighten || stagnant >= 2)) break;
    // J = -Delta_h - diag(d_y f); d_y f <= 0 keeps it an M-matrix
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j)
        diag.at(i, j) = std::max(0.0, -f.dv(g.x(i), g.y(j), u.at(i, j)));
    GridFunction du = op->solve_shifted(r, diag);

    double lambda = 1.0;
    double rn_new = std::numeric_limits<double>::infinity();
    int ls = 0;
    for (; ls < opts.max_line_search; ++ls) {
      trial = u;
      for (std::size_t k = 0; k < trial.values().size(); ++k) trial[k] += lambda * du[k];
      rn_new = residual(g, f, rhs, trial, r);
      if (std::isfinite(rn_new) && rn_new < rn) break;
      lambda *= 0.5;
    }
    if (ls == opts.max_line_search) {
      if (rn <= tol) break;  // at the stagnation floor already
      // Newton stalled; monotone nodewise sweeps make progress on stiff f
      for (int sweep = 0; sweep < 5; ++sweep) gauss_seidel_sweep(g, f, rhs, u);
      rn_new = residual(g, f, rhs, u, r);
      if (!(rn_new < rn)) {
        rn = rn_new;
        break;
      }
    } else {
      u = trial;
    }
    if (rn_new > best * 0.999999) ++stagnant;
    else { best = rn_new; stagnant = 0; }
    rn = rn_new;
  }
  // r currently holds the residual field of the accepted iterate
  rn = residual(g, f, rhs, u, r);

  SolveReport rep{GridFunction(g), 0, 0.0, false, {}};
  rep.u = std::move(u);
  rep.newton_iters = it;
  rep.final_residual = rn;
  rep.converged = rn <= tol;
  if (!rep.converged)
    throw ConvergenceError("solve: Newton did not reach tolerance (residual " +
                               std::to_string(rn) + ", tol " + std::to_string(tol) + ")",
                           rn);
  Norms nm = norms(rep.u, opts.q);
  GridFunction fu(g);
  eval_f(f, g, rep.u, fu);
  rep.norms = NormTable{nm.l1, nm.linf, nm.w1q, l1_norm(fu), opts.q};
  return rep;
}

namespace {

double default_tol(const Measure& m, double tol) {
  if (tol >= 0.0) return tol;
  return 1e-6 * (1.0 + linf_norm(discretize_rhs(m)));
}

}  // namespace

bool verify_subsolution(const GridFunction& u, const Nonlinearity& f, const Measure& m,
                        double tol) {
  require_same_grid(u.grid(), m.grid(), "verify_subsolution");
  const Grid& g = u.grid();
  const GridFunction rhs = discretize_rhs(m);
  const GridFunction lap = laplacian_apply(u);
  const double t = default_tol(m, tol);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (lap.at(i, j) - f(g.x(i), g.y(j), u.at(i, j)) - rhs.at(i, j) > t) return false;
  return true;
}

bool verify_supersolution(const GridFunction& u, const Nonlinearity& f, const Measure& m,
                          double tol) {
  require_same_grid(u.grid(), m.grid(), "verify_supersolution");
  const Grid& g = u.grid();
  const GridFunction rhs = discretize_rhs(m);
  const GridFunction lap = laplacian_apply(u);
  const double t = default_tol(m, tol);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      if (lap.at(i, j) - f(g.x(i), g.y(j), u.at(i, j)) - rhs.at(i, j) < -t) return false;
  return true;
}

bool check_comparison(const Nonlinearity& f1, const Measure& m1, const Nonlinearity& f2,
                      const Measure& m2, double slack) {
  require_same_grid(m1.grid(), m2.grid(), "check_comparison");
  const Grid& g = m1.grid();
  const GridFunction r1 = discretize_rhs(m1), r2 = discretize_rhs(m2);
  for (std::size_t k = 0; k < r1.values().size(); ++k)
    if (r1[k] > r2[k] + 1e-12 * std::max(1.0, std::abs(r2[k])))
      throw std::invalid_argument("check_comparison: m1 <= m2 violated");
  const double probe[] = {-10.0, -1.0, -0.1, 0.0, 0.1, 1.0, 10.0, 100.0};
  for (int i = 0; i < g.n(); i += std::max(1, g.n() / 6)) {
    for (int j = 0; j < g.n(); j += std::max(1, g.n() / 6)) {
      for (double v : probe)
        if (f1(g.x(i), g.y(j), v) > f2(g.x(i), g.y(j), v) + 1e-12)
          throw std::invalid_argument("check_comparison: f1 <= f2 violated on samples");
    }
  }
  SolveReport a = solve(f1, m1), b = solve(f2, m2);
  for (std::size_t k = 0; k < a.u.values().size(); ++k)
    if (a.u[k] > b.u[k] + slack) return false;
  return true;
}

AprioriData check_apriori_bound(const SolveReport& report, const Nonlinearity& f,
                                const Measure& m, double q) {
  const Grid& g = report.u.grid();
  AprioriData d;
  Norms nm = norms(report.u, q);
  GridFunction fu(g), f0(g);
  eval_f(f, g, report.u, fu);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) f0.at(i, j) = f(g.x(i), g.y(j), 0.0);
  d.w1q = nm.w1q;
  d.f_l1 = l1_norm(fu);
  d.f0_l1 = l1_norm(f0);
  d.tv = total_variation(m);
  d.lhs = d.w1q + d.f_l1;
  d.rhs = d.f0_l1 + d.tv;
  return d;
}

}  // namespace mplab
