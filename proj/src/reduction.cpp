#include "mplab/reduction.hpp"

#include <algorithm>
#include <cmath>

#include "mplab/green.hpp"

namespace mplab {

double extraction_patch_radius(const Grid& g) {
  return std::max(g.h(), 0.3 * std::sqrt(g.h()));
}

Measure extract_measure(const GridFunction& u_star, const Nonlinearity& f,
                        const std::vector<Atom>& original_atoms) {
  const Grid& g = u_star.grid();
  const GridFunction lap = laplacian_apply(u_star);
  const double h2 = g.h() * g.h();

  // atom nodes and patch ownership (nearest atom, ties to the earlier atom)
  std::vector<std::pair<int, int>> nodes;
  nodes.reserve(original_atoms.size());
  for (const Atom& a : original_atoms) nodes.push_back(nearest_interior_node(g, a.x, a.y));

  double rho = extraction_patch_radius(g);
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const double d = std::hypot(g.x(nodes[a].first) - g.x(nodes[b].first),
                                  g.y(nodes[a].second) - g.y(nodes[b].second));
      rho = std::min(rho, 0.45 * d);
    }
  rho = std::max(rho, g.h());

  std::vector<double> masses(original_atoms.size(), 0.0);
  GridFunction density(g);
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      int owner = -1;
      double best = rho;
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        const double d = std::hypot(g.x(i) - g.x(nodes[a].first), g.y(j) - g.y(nodes[a].second));
        if (d <= best + 1e-12 * rho && (owner < 0 || d < best)) {
          owner = static_cast<int>(a);
          best = d;
        }
      }
      if (owner >= 0) {
        masses[static_cast<std::size_t>(owner)] += h2 * lap.at(i, j);
      } else {
        density.at(i, j) = lap.at(i, j) - f(g.x(i), g.y(j), u_star.at(i, j));
      }
    }
  }
  std::vector<Atom> atoms;
  for (std::size_t a = 0; a < original_atoms.size(); ++a)
    atoms.push_back(Atom{original_atoms[a].x, original_atoms[a].y, masses[a]});
  return Measure(std::move(density), std::move(atoms));
}

namespace {

double first_atom_estimate(const GridFunction& u, const Nonlinearity& f,
                           const std::vector<Atom>& atoms) {
  if (atoms.empty()) return 0.0;
  return extract_measure(u, f, atoms).atoms().front().mass;
}

ReductionResult assemble(GridFunction u, const Nonlinearity& f, const Measure& m,
                         std::vector<TraceRow> trace, Scheme scheme, bool converged,
                         double tol_seq) {
  Measure extracted = extract_measure(u, f, m.atoms());
  return ReductionResult{std::move(u), std::move(extracted), std::move(trace), scheme,
                         converged, tol_seq};
}

}  // namespace

ReductionResult reduce_by_truncation(const Nonlinearity& f, const Measure& m,
                                     const ReductionOptions& opts) {
  const Grid& g = m.grid();
  std::vector<TraceRow> trace;
  GridFunction u(g);
  double tol_seq = 0.0;
  bool have_prev = false;
  bool converged = false;

  SolveOptions sopts = opts.solver;
  for (int j = 0; j < opts.max_truncation_levels; ++j) {
    const double level = std::ldexp(1.0, j);  // 2^j
    Nonlinearity fj = f.truncate_below(level);
    sopts.warm_start = have_prev ? &u : nullptr;
    sopts.certify = (j == 0) && opts.solver.certify;
    SolveReport rep = solve(fj, m, sopts);

    double inc = have_prev ? l1_distance(rep.u, u) : 0.0;
    u = rep.u;
    if (!have_prev) tol_seq = opts.tol_seq_rel_truncation * std::max(l1_norm(u), 1e-300);

    // inactive truncation: f(., u) > -2^j everywhere, so u solves the raw problem
    bool inactive = true;
    for (int i = 0; i < g.n() && inactive; ++i)
      for (int k = 0; k < g.n(); ++k)
        if (f(g.x(i), g.y(k), u.at(i, k)) <= -level) {
          inactive = false;
          break;
        }

    trace.push_back(TraceRow{j, level, inc, first_atom_estimate(u, f, m.atoms()), l1_norm(u),
                             rep.newton_iters});
    if (have_prev && inc < tol_seq && inactive) {
      converged = true;
      break;
    }
    have_prev = true;
  }
  if (!converged)
    throw NonConvergedSequence("reduce_by_truncation: ladder did not settle", std::move(trace));
  return assemble(std::move(u), f, m, std::move(trace), Scheme::truncation, converged, tol_seq);
}

ReductionResult reduce_by_mollification(const Nonlinearity& f, const Measure& m,
                                        const ReductionOptions& opts) {
  const Grid& g = m.grid();
  const int n0 = opts.mollification_start > 0 ? opts.mollification_start
                                              : default_mollification_start(m);
  std::vector<TraceRow> trace;
  GridFunction u(g);
  double tol_seq = 0.0;
  bool have_prev = false;
  double last_inc = 0.0;
  double prev_inc = 0.0;

  SolveOptions sopts = opts.solver;
  int level = 0;
  bool certified = false;
  auto run_level = [&](const Measure& data, double parameter) {
    sopts.warm_start = have_prev ? &u : nullptr;
    sopts.certify = !certified && opts.solver.certify;
    SolveReport rep = solve(f, data, sopts);
    certified = true;
    double inc = have_prev ? l1_distance(rep.u, u) : 0.0;
    u = rep.u;
    if (!have_prev) tol_seq = opts.tol_seq_rel_mollification * std::max(l1_norm(u), 1e-300);
    prev_inc = last_inc;
    last_inc = inc;
    trace.push_back(TraceRow{level, parameter, inc, first_atom_estimate(u, f, m.atoms()),
                             l1_norm(u), rep.newton_iters});
    ++level;
    have_prev = true;
  };

  for (int nk = n0; 1.0 / nk >= 2.0 * g.h() - 1e-12; nk *= 2) {
    MollifierKernel kernel = MollifierKernel::build(nk, g);
    run_level(mollify_measure(m, kernel, g), static_cast<double>(nk));
  }
  // sub-cell kernels are the identity on the lattice: finish on the raw data
  run_level(m, 0.0);

  const bool converged =
      trace.size() >= 2 && last_inc < tol_seq && last_inc <= std::max(prev_inc, tol_seq);
  return assemble(std::move(u), f, m, std::move(trace), Scheme::mollification, converged,
                  tol_seq);
}

Measure project(const Nonlinearity& f, const Measure& m, const ReductionOptions& opts) {
  auto [pos, neg] = jordan_decompose(m);
  ReductionResult rp = reduce_by_truncation(f, pos, opts);
  ReductionResult rn = reduce_by_truncation(f.reflect(), neg, opts);
  return rp.extracted - rn.extracted;
}

Measure project_variant(const Nonlinearity& f, const Measure& m, const ReductionOptions& opts) {
  auto [pos, neg] = jordan_decompose(m);
  ReductionResult rp = reduce_by_truncation(f.negative_part_only(), pos, opts);
  ReductionResult rn = reduce_by_truncation(f.positive_part().reflect(), neg, opts);
  return rp.extracted - rn.extracted;
}

IdentityReport check_reduction_identities(const Nonlinearity& f, const Measure& m,
                                          const ReductionOptions& opts) {
  auto [pos, neg] = jordan_decompose(m);
  if (total_variation(neg) > 0.0)
    throw std::invalid_argument("check_reduction_identities: m must be >= 0");

  ReductionResult full = reduce_by_truncation(f, m, opts);
  const double qtol = 0.02 * std::max(1.0, total_variation(m));
  const double thr = 3.0 * full.tol_seq + qtol;
  const auto split_m = split_diffuse_concentrated(m);
  const auto split_x = split_diffuse_concentrated(full.extracted);
  IdentityReport rep;

  // (mu+)* = (mu*)+ ; for m >= 0 the left side is mu* itself
  {
    const double neg_tv = total_variation(jordan_decompose(full.extracted).second);
    rep.rows.push_back(IdentityRow{"(mu+)* = (mu*)+", neg_tv, thr, neg_tv < thr});
  }
  // (mu_c)* = (mu*)_c
  {
    double disc;
    if (total_variation(split_m.second) == 0.0) {
      disc = total_variation(split_x.second);
    } else {
      ReductionResult conc = reduce_by_truncation(f, split_m.second, opts);
      disc = total_variation(split_diffuse_concentrated(conc.extracted).second - split_x.second);
    }
    rep.rows.push_back(IdentityRow{"(mu_c)* = (mu*)_c", disc, thr, disc < thr});
  }
  // (mu*)_d = mu_d
  {
    const double disc = total_variation(split_x.first - split_m.first);
    rep.rows.push_back(IdentityRow{"(mu*)_d = mu_d", disc, thr, disc < thr});
  }
  // |mu*| <= |mu|
  {
    const double excess = total_variation(full.extracted) - total_variation(m);
    rep.rows.push_back(IdentityRow{"|mu*| <= |mu|", std::max(0.0, excess), thr,
                                   excess < thr});
  }
  return rep;
}

double lemma31_invariance(const Nonlinearity& f1, const Nonlinearity& f2, const Measure& m,
                          const ReductionOptions& opts) {
  ReductionResult a = reduce_by_truncation(f1, m, opts);
  ReductionResult b = reduce_by_truncation(f2, m, opts);
  return total_variation(a.extracted - b.extracted);
}

}  // namespace mplab
