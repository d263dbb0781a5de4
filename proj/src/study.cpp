#include "mplab/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <thread>
#include <tuple>

#include <nlohmann/json.hpp>

#include "mplab/green.hpp"
#include "mplab/io.hpp"
#include "mplab/richardson.hpp"
#include "mplab/svg.hpp"

namespace mplab {

using nlohmann::json;

namespace {

std::string config_hash(const ExperimentConfig& cfg) {
  // FNV-1a over the canonical dump
  const std::string s = cfg.canonical_json();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json provenance(const ExperimentConfig& cfg, const std::string& command) {
  return json{{"command", command}, {"config_hash", config_hash(cfg)}, {"version", "0.1.0"}};
}

void run_indexed(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  const int workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t k = next.fetch_add(1);
        if (k >= count) return;
        try {
          fn(k);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

json trace_json(const std::vector<TraceRow>& trace) {
  json rows = json::array();
  for (const TraceRow& r : trace)
    rows.push_back({{"level", r.level},
                    {"parameter", r.parameter},
                    {"l1_increment", r.l1_increment},
                    {"atom_mass_estimate", r.atom_mass_estimate},
                    {"l1_norm", r.l1_norm},
                    {"newton_iters", r.newton_iters}});
  return rows;
}

std::string trace_csv(const std::vector<std::tuple<int, std::string, TraceRow>>& rows) {
  std::string out = "grid,scheme,level,parameter,l1_increment,atom_mass_estimate,l1_norm\n";
  for (const auto& [n, scheme, r] : rows) {
    out += std::to_string(n) + "," + scheme + "," + std::to_string(r.level) + "," +
           format_number(r.parameter) + "," + format_number(r.l1_increment) + "," +
           format_number(r.atom_mass_estimate) + "," + format_number(r.l1_norm) + "\n";
  }
  return out;
}

json norm_json(const NormTable& n) {
  return json{{"l1", n.l1}, {"linf", n.linf}, {"w1q", n.w1q}, {"f_l1", n.f_l1}, {"q", n.q}};
}

void write_solution(const ExperimentConfig& cfg, int n, const GridFunction& u) {
  atomic_write(cfg.out / ("solution_" + std::to_string(n) + ".csv"), grid_function_csv(u));
  atomic_write(cfg.out / ("solution_" + std::to_string(n) + ".json"),
               grid_header_json(u.grid()));
}

json richardson_json(const RichardsonFit& fit, const std::vector<double>& hs,
                     const std::vector<double>& raw) {
  return json{{"a0", fit.a0},        {"c", fit.c},   {"beta", fit.beta},
              {"residual", fit.residual}, {"h", hs}, {"raw", raw}};
}

struct InvariantRow {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

json invariants_json(const std::vector<InvariantRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back(
        {{"name", r.name}, {"value", r.value}, {"threshold", r.threshold}, {"pass", r.pass}});
  return out;
}

void print_invariants(const std::vector<InvariantRow>& rows) {
  for (const auto& r : rows)
    std::printf("  %-58s %s  (value %.3e, threshold %.3e)\n", r.name.c_str(),
                r.pass ? "pass" : "FAIL", r.value, r.threshold);
}

}  // namespace

int run_solve(const ExperimentConfig& cfg, int jobs) {
  std::vector<json> rows(cfg.grids.size());
  std::vector<GridFunction> solutions;
  solutions.reserve(cfg.grids.size());
  for (int n : cfg.grids) solutions.emplace_back(Grid::build(cfg.bounds, n));

  Nonlinearity f = cfg.f.instantiate();
  run_indexed(cfg.grids.size(), jobs, [&](std::size_t k) {
    const int n = cfg.grids[k];
    Grid g = Grid::build(cfg.bounds, n);
    Measure m = cfg.measure.instantiate(g);
    SolveOptions opts = cfg.reduction.solver;
    opts.q = cfg.q;
    SolveReport rep = solve(f, m, opts);
    const double green_res = green_representation_residual(rep.u, f, m);
    solutions[k] = rep.u;
    rows[k] = json{{"n", n},
                   {"h", g.h()},
                   {"newton_iters", rep.newton_iters},
                   {"final_residual", rep.final_residual},
                   {"converged", rep.converged},
                   {"green_representation_residual", green_res},
                   {"norms", norm_json(rep.norms)}};
  });

  PlotSpec plot;
  plot.title = "solution norms vs h";
  plot.x_label = "h";
  plot.y_label = "norm";
  plot.log_x = true;
  PlotSeries l1{"l1", "#1f77b4", {}, {}, true};
  PlotSeries linf{"linf", "#d62728", {}, {}, true};
  for (std::size_t k = 0; k < cfg.grids.size(); ++k) {
    write_solution(cfg, cfg.grids[k], solutions[k]);
    l1.x.push_back(rows[k]["h"].get<double>());
    l1.y.push_back(rows[k]["norms"]["l1"].get<double>());
    linf.x.push_back(rows[k]["h"].get<double>());
    linf.y.push_back(rows[k]["norms"]["linf"].get<double>());
  }
  plot.series = {l1, linf};
  atomic_write(cfg.out / "plots" / "norms_vs_h.svg", render_svg(plot));

  json report = provenance(cfg, "solve");
  report["rows"] = rows;
  atomic_write(cfg.out / "report.json", report.dump(2) + "\n");
  std::printf("solve: %zu grid(s) done, report at %s\n", cfg.grids.size(),
              (cfg.out / "report.json").c_str());
  return 0;
}

namespace {

struct ReduceOutcome {
  std::vector<json> rows;
  std::vector<std::tuple<int, std::string, TraceRow>> trace_rows;
  std::vector<double> hs;
  std::vector<double> atom_truncation;
  std::vector<double> atom_mollification;
  std::vector<double> gaps;  // two-scheme l1 gap per grid (relative)
  bool all_converged = true;
  std::vector<GridFunction> u_stars;
};

ReduceOutcome reduce_over_ladder(const ExperimentConfig& cfg, int jobs) {
  const bool do_trunc = cfg.scheme == "truncation" || cfg.scheme == "both";
  const bool do_moll = cfg.scheme == "mollification" || cfg.scheme == "both";
  Nonlinearity f = cfg.f.instantiate();

  ReduceOutcome out;
  out.rows.resize(cfg.grids.size());
  std::vector<std::vector<std::tuple<int, std::string, TraceRow>>> traces(cfg.grids.size());
  for (int n : cfg.grids) out.u_stars.emplace_back(Grid::build(cfg.bounds, n));
  out.hs.resize(cfg.grids.size());
  out.atom_truncation.assign(cfg.grids.size(), 0.0);
  out.atom_mollification.assign(cfg.grids.size(), 0.0);
  out.gaps.assign(cfg.grids.size(), 0.0);
  std::vector<char> converged(cfg.grids.size(), 1);

  run_indexed(cfg.grids.size(), jobs, [&](std::size_t k) {
    const int n = cfg.grids[k];
    Grid g = Grid::build(cfg.bounds, n);
    Measure m = cfg.measure.instantiate(g);
    out.hs[k] = g.h();
    json row{{"n", n}, {"h", g.h()}};
    const bool has_atoms = !m.atoms().empty();

    std::optional<ReductionResult> rt, rm;
    if (do_trunc) {
      rt = reduce_by_truncation(f, m, cfg.reduction);
      for (const TraceRow& t : rt->trace) traces[k].emplace_back(n, "truncation", t);
      row["truncation"] = {{"converged", rt->converged},
                           {"levels", rt->trace.size()},
                           {"extracted", json::parse(measure_json(rt->extracted))},
                           {"trace", trace_json(rt->trace)}};
      if (has_atoms) out.atom_truncation[k] = rt->extracted.atoms().front().mass;
      converged[k] = converged[k] && rt->converged;
    }
    if (do_moll) {
      ReductionOptions ropts = cfg.reduction;
      rm = reduce_by_mollification(f, m, ropts);
      for (const TraceRow& t : rm->trace) traces[k].emplace_back(n, "mollification", t);
      row["mollification"] = {{"converged", rm->converged},
                              {"levels", rm->trace.size()},
                              {"extracted", json::parse(measure_json(rm->extracted))},
                              {"trace", trace_json(rm->trace)}};
      if (has_atoms) out.atom_mollification[k] = rm->extracted.atoms().front().mass;
      converged[k] = converged[k] && rm->converged;
    }
    if (rt && rm) {
      const double gap = l1_distance(rt->u_star, rm->u_star) /
                         std::max(l1_norm(rt->u_star), 1e-300);
      out.gaps[k] = gap;
      row["two_scheme_l1_gap"] = gap;
    }
    out.u_stars[k] = rt ? rt->u_star : rm->u_star;
    out.rows[k] = std::move(row);
  });
  for (std::size_t k = 0; k < cfg.grids.size(); ++k) {
    out.all_converged = out.all_converged && converged[k];
    for (auto& t : traces[k]) out.trace_rows.push_back(std::move(t));
  }
  return out;
}

void emit_reduce_plots(const ExperimentConfig& cfg, const ReduceOutcome& out,
                       bool has_atoms) {
  // l1 increment vs level, per grid and scheme
  PlotSpec inc;
  inc.title = "l1 increment vs ladder level";
  inc.x_label = "level";
  inc.y_label = "l1 increment";
  inc.log_y = true;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};
  std::size_t ci = 0;
  std::map<std::pair<int, std::string>, PlotSeries> series;
  for (const auto& [n, scheme, r] : out.trace_rows) {
    auto key = std::make_pair(n, scheme);
    auto it = series.find(key);
    if (it == series.end()) {
      PlotSeries s;
      s.label = scheme + " n=" + std::to_string(n);
      s.color = colors[ci++ % 5];
      it = series.emplace(key, std::move(s)).first;
    }
    if (r.l1_increment > 0.0) {
      it->second.x.push_back(r.level);
      it->second.y.push_back(r.l1_increment);
    }
  }
  for (auto& [key, s] : series) inc.series.push_back(s);
  atomic_write(cfg.out / "plots" / "increments.svg", render_svg(inc));

  if (has_atoms) {
    PlotSpec am;
    am.title = "extracted atom mass vs h";
    am.x_label = "h";
    am.y_label = "atom mass";
    am.log_x = true;
    if (cfg.scheme != "mollification")
      am.series.push_back(PlotSeries{"truncation", "#1f77b4", out.hs, out.atom_truncation, true});
    if (cfg.scheme != "truncation")
      am.series.push_back(
          PlotSeries{"mollification", "#d62728", out.hs, out.atom_mollification, true});
    atomic_write(cfg.out / "plots" / "atom_mass_vs_h.svg", render_svg(am));
  }
  if (cfg.scheme == "both") {
    PlotSpec gp;
    gp.title = "two-scheme l1 gap vs h";
    gp.x_label = "h";
    gp.y_label = "relative l1 gap";
    gp.log_x = true;
    gp.log_y = true;
    std::vector<double> gx = out.hs, gy = out.gaps;
    for (double& v : gy) v = std::max(v, 1e-16);
    gp.series.push_back(PlotSeries{"gap", "#2ca02c", gx, gy, true});
    atomic_write(cfg.out / "plots" / "two_scheme_gap.svg", render_svg(gp));
  }
}

}  // namespace

int run_reduce(const ExperimentConfig& cfg, int jobs) {
  ReduceOutcome out = reduce_over_ladder(cfg, jobs);
  const bool has_atoms = !cfg.measure.atoms.empty();

  json report = provenance(cfg, "reduce");
  report["rows"] = out.rows;
  if (has_atoms && cfg.grids.size() >= 3) {
    if (cfg.scheme != "mollification") {
      RichardsonFit fit = richardson_fit(out.hs, out.atom_truncation, cfg.richardson_beta_min,
                                         cfg.richardson_beta_max);
      report["richardson_truncation"] = richardson_json(fit, out.hs, out.atom_truncation);
    }
    if (cfg.scheme != "truncation") {
      RichardsonFit fit = richardson_fit(out.hs, out.atom_mollification,
                                         cfg.richardson_beta_min, cfg.richardson_beta_max);
      report["richardson_mollification"] = richardson_json(fit, out.hs, out.atom_mollification);
    }
  }
  report["all_converged"] = out.all_converged;

  for (std::size_t k = 0; k < cfg.grids.size(); ++k) {
    write_solution(cfg, cfg.grids[k], out.u_stars[k]);
    atomic_write(cfg.out / ("extracted_" + std::to_string(cfg.grids[k]) + ".json"),
                 out.rows[k].contains("truncation")
                     ? out.rows[k]["truncation"]["extracted"].dump(2) + "\n"
                     : out.rows[k]["mollification"]["extracted"].dump(2) + "\n");
  }
  atomic_write(cfg.out / "trace.csv", trace_csv(out.trace_rows));
  emit_reduce_plots(cfg, out, has_atoms);
  atomic_write(cfg.out / "report.json", report.dump(2) + "\n");

  std::printf("reduce: %zu grid(s), converged=%s\n", cfg.grids.size(),
              out.all_converged ? "yes" : "NO");
  if (has_atoms && cfg.grids.size() >= 3 && cfg.scheme != "mollification")
    std::printf("  extrapolated atom mass (truncation): %.6f\n",
                report["richardson_truncation"]["a0"].get<double>());
  return out.all_converged ? 0 : 1;
}

int run_project(const ExperimentConfig& cfg, int jobs) {
  Nonlinearity f = cfg.f.instantiate();
  std::vector<json> rows(cfg.grids.size());
  run_indexed(cfg.grids.size(), jobs, [&](std::size_t k) {
    const int n = cfg.grids[k];
    Grid g = Grid::build(cfg.bounds, n);
    Measure m = cfg.measure.instantiate(g);
    Measure pi = project(f, m, cfg.reduction);
    Measure pi_var = project_variant(f, m, cfg.reduction);
    const double tv_disagreement = total_variation(pi - pi_var);
    const double defect = total_variation(m - pi);
    rows[k] = json{{"n", n},
                   {"h", g.h()},
                   {"projection", json::parse(measure_json(pi))},
                   {"variant", json::parse(measure_json(pi_var))},
                   {"tv_project_vs_variant", tv_disagreement},
                   {"tv_distance_to_input", defect}};
    atomic_write(cfg.out / ("projection_" + std::to_string(n) + ".json"), measure_json(pi));
  });
  json report = provenance(cfg, "project");
  report["rows"] = rows;
  atomic_write(cfg.out / "report.json", report.dump(2) + "\n");
  std::printf("project: %zu grid(s) done\n", cfg.grids.size());
  return 0;
}

int run_admissible(const ExperimentConfig& cfg, int jobs) {
  (void)jobs;
  Nonlinearity f = cfg.f.instantiate();
  AdmissibilityVerdict v = admissibility_check(
      f, [&](const Grid& g) { return cfg.measure.instantiate(g); }, cfg.grids, cfg.cauchy_tol,
      cfg.divergence_threshold);
  json report = provenance(cfg, "admissible");
  report["I_h"] = v.integral;
  report["h"] = v.h;
  report["ladder"] = v.ladder;
  report["rel_increments"] = v.rel_increment;
  report["growth_exponent"] = v.growth_exponent;
  report["cauchy_tol"] = v.cauchy_tol;
  report["divergence_threshold"] = v.divergence_threshold;
  report["verdict"] = to_string(v.verdict);
  atomic_write(cfg.out / "report.json", report.dump(2) + "\n");

  PlotSpec plot;
  plot.title = "admissibility integral I_h vs 1/h";
  plot.x_label = "1/h";
  plot.y_label = "I_h";
  plot.log_x = true;
  plot.log_y = true;
  PlotSeries s{"I_h", "#1f77b4", {}, {}, true};
  for (std::size_t k = 0; k < v.h.size(); ++k) {
    s.x.push_back(1.0 / v.h[k]);
    s.y.push_back(v.integral[k]);
  }
  plot.series.push_back(s);
  plot.annotation = "fitted slope " + format_number(v.growth_exponent) + ", verdict " +
                    to_string(v.verdict);
  atomic_write(cfg.out / "plots" / "admissibility.svg", render_svg(plot));
  std::printf("admissible: verdict %s (exponent %.4f)\n", to_string(v.verdict).c_str(),
              v.growth_exponent);
  return 0;
}

int run_sweep(const ExperimentConfig& cfg, int jobs) {
  ExperimentConfig c2 = cfg;
  c2.scheme = "both";
  ReduceOutcome out = reduce_over_ladder(c2, jobs);
  const bool has_atoms = !cfg.measure.atoms.empty();
  Nonlinearity f = cfg.f.instantiate();

  std::vector<InvariantRow> inv;
  for (std::size_t k = 0; k < cfg.grids.size(); ++k)
    inv.push_back(InvariantRow{"two-scheme l1 gap, n=" + std::to_string(cfg.grids[k]),
                               out.gaps[k], 0.03, out.gaps[k] < 0.03});

  // a priori ratios over the mollification family and the grid ladder
  std::vector<double> ratios;
  for (std::size_t k = 0; k < cfg.grids.size(); ++k) {
    Grid g = Grid::build(cfg.bounds, cfg.grids[k]);
    Measure m = cfg.measure.instantiate(g);
    SolveOptions sopts = cfg.reduction.solver;
    sopts.q = cfg.q;
    GridFunction warm(g);
    bool have_warm = false;
    for (int nk = cfg.reduction.mollification_start > 0 ? cfg.reduction.mollification_start
                                                        : default_mollification_start(m);
         1.0 / nk >= 2.0 * g.h() - 1e-12; nk *= 2) {
      MollifierKernel kernel = MollifierKernel::build(nk, g, cfg.mollifier_profile);
      Measure mm = mollify_measure(m, kernel, g);
      sopts.warm_start = have_warm ? &warm : nullptr;
      SolveReport rep = solve(f, mm, sopts);
      warm = rep.u;
      have_warm = true;
      AprioriData ad = check_apriori_bound(rep, f, mm, cfg.q);
      if (ad.rhs > 0.0) ratios.push_back(ad.lhs / ad.rhs);
    }
  }
  if (!ratios.empty()) {
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    const double variation = (hi - lo) / std::max(hi, 1e-300);
    inv.push_back(InvariantRow{"a priori ratio variation over family", variation, 0.20,
                               variation < 0.20});
  }

  json report = provenance(cfg, "sweep");
  report["rows"] = out.rows;
  report["apriori_ratios"] = ratios;
  if (has_atoms && cfg.grids.size() >= 3) {
    RichardsonFit ft = richardson_fit(out.hs, out.atom_truncation, cfg.richardson_beta_min,
                                      cfg.richardson_beta_max);
    report["richardson_truncation"] = richardson_json(ft, out.hs, out.atom_truncation);
    RichardsonFit fm = richardson_fit(out.hs, out.atom_mollification, cfg.richardson_beta_min,
                                      cfg.richardson_beta_max);
    report["richardson_mollification"] = richardson_json(fm, out.hs, out.atom_mollification);
  }
  bool inv_pass = true;
  for (const auto& r : inv) inv_pass = inv_pass && r.pass;
  report["invariants"] = invariants_json(inv);
  report["all_converged"] = out.all_converged;

  for (std::size_t k = 0; k < cfg.grids.size(); ++k)
    write_solution(cfg, cfg.grids[k], out.u_stars[k]);
  atomic_write(cfg.out / "trace.csv", trace_csv(out.trace_rows));
  emit_reduce_plots(c2, out, has_atoms);
  atomic_write(cfg.out / "report.json", report.dump(2) + "\n");

  std::printf("sweep: %zu grid(s)\n", cfg.grids.size());
  print_invariants(inv);
  return (out.all_converged && inv_pass) ? 0 : 1;
}

// ---------------------------------------------------------------------------
// verify: the built-in invariant corpus
// ---------------------------------------------------------------------------

namespace {

GridFunction smooth_bump(const Grid& g) {
  return GridFunction::sample(
      g, [](double x, double y) { return std::sin(3.14159265358979323846 * x) *
                                         std::sin(3.14159265358979323846 * y); });
}

}  // namespace

int run_verify(const ExperimentConfig& cfg, int jobs) {
  std::vector<std::function<InvariantRow()>> tasks;
  const double pi = 3.14159265358979323846;

  // --- comparison principle on randomized precondition-satisfying pairs ---
  tasks.push_back([&cfg, pi]() {
    std::mt19937 rng(cfg.seed);
    std::uniform_real_distribution<double> pos(0.2, 0.8), mass(0.1, 2.0), dens(-1.0, 1.0);
    Grid g = Grid::unit_square(63);
    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
      const double d = dens(rng);
      GridFunction base(g, d);
      Measure m1 = Measure::density_only(base);
      Measure m2 = m1 + Measure::dirac(g, pos(rng), pos(rng), mass(rng));
      Nonlinearity f = Nonlinearity::exponential(1.0);
      SolveReport a = solve(f, m1), b = solve(f, m2);
      for (std::size_t k = 0; k < a.u.values().size(); ++k)
        worst = std::max(worst, a.u[k] - b.u[k]);
    }
    return InvariantRow{"comparison: mu1 <= mu1 + atom gives u1 <= u2", worst, 1e-10,
                        worst < 1e-10};
  });

  tasks.push_back([pi]() {
    Grid g = Grid::unit_square(63);
    GridFunction dens = smooth_bump(g);
    dens *= 2.0 * pi * pi;
    Measure m = Measure::density_only(dens);
    Nonlinearity f1 = Nonlinearity::power(3);
    Nonlinearity f2 = f1.shifted_by([](double, double) { return 1.0; }, "1");
    const bool ok = check_comparison(f1, m, f2, m);
    return InvariantRow{"comparison: f2 = f1 + 1 gives u1 <= u2", ok ? 0.0 : 1.0, 0.5, ok};
  });

  // --- mollifier contract ---
  tasks.push_back([]() {
    Grid g = Grid::unit_square(127);
    double worst = 0.0;
    for (int n : {8, 16, 32, 64}) {
      MollifierKernel k = MollifierKernel::build(n, g);
      worst = std::max(worst, std::abs(k.discrete_mass(g) - 1.0));
    }
    return InvariantRow{"mollifier: unit discrete mass", worst, 1e-12, worst < 1e-12};
  });

  tasks.push_back([]() {
    Grid g = Grid::unit_square(127);
    MollifierKernel k = MollifierKernel::build(16, g);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
    Measure r = mollify_measure(m, k, g);
    double mass = 0.0;
    for (double v : r.density().values()) mass += v;
    mass *= g.h() * g.h();
    return InvariantRow{"mollifier: interior atom keeps mass 1", std::abs(mass - 1.0), 1e-12,
                        std::abs(mass - 1.0) < 1e-12};
  });

  tasks.push_back([]() {
    // positivity, monotonicity, linearity of R_n
    Grid g = Grid::unit_square(63);
    MollifierKernel k = MollifierKernel::build(8, g);
    Measure a = Measure::dirac(g, 0.4, 0.45, 0.7);
    GridFunction d(g, 0.3);
    Measure b = Measure::density_only(d) + Measure::dirac(g, 0.6, 0.55, 0.9);
    GridFunction ra = mollify_field(discretize_rhs(a), k);
    GridFunction rb = mollify_field(discretize_rhs(b), k);
    double worst = 0.0;
    for (double v : ra.values()) worst = std::max(worst, -v);  // positivity
    // monotonicity: a <= a + b pointwise after discretization
    GridFunction rab = mollify_field(discretize_rhs(a + b), k);
    for (std::size_t q = 0; q < ra.values().size(); ++q)
      worst = std::max(worst, ra[q] - rab[q]);
    // linearity
    GridFunction combo = mollify_field(discretize_rhs(a.scaled(2.0) - b.scaled(3.0)), k);
    for (std::size_t q = 0; q < ra.values().size(); ++q)
      worst = std::max(worst, std::abs(2.0 * ra[q] - 3.0 * rb[q] - combo[q]));
    return InvariantRow{"mollifier: positivity/monotonicity/linearity", worst, 1e-9,
                        worst < 1e-9};
  });

  tasks.push_back([]() {
    Grid g = Grid::unit_square(63);
    MollifierKernel k = MollifierKernel::build(8, g);
    GridFunction d(g);
    d.at(31, 31) = 5.0 / (g.h() * g.h());
    Measure m = Measure::density_only(d) + Measure::dirac(g, 0.25, 0.7, -2.0);
    Measure r = mollify_measure(m, k, g);
    const double tv_gap = total_variation(r) - total_variation(m);
    return InvariantRow{"mollifier: TV(R m) <= TV(m) + tol", tv_gap, 1e-9, tv_gap < 1e-9};
  });

  tasks.push_back([pi]() {
    // narrow convergence against a smooth test field
    Grid g = Grid::unit_square(127);
    GridFunction eta = smooth_bump(g);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
    GridFunction raw = discretize_rhs(m);
    double prev = 1e300, final_gap = 0.0;
    bool decreasing = true;
    for (int n : {8, 16, 32, 64}) {
      MollifierKernel k = MollifierKernel::build(n, g);
      GridFunction rm = mollify_field(raw, k);
      const double gap = std::abs(dot(rm, eta) - dot(raw, eta));
      decreasing = decreasing && (gap < prev);
      prev = gap;
      final_gap = gap;
    }
    return InvariantRow{"mollifier: narrow convergence (gap at finest n)", final_gap, 1e-3,
                        decreasing && final_gap < 1e-3};
  });

  tasks.push_back([]() {
    // Green-potential monotone chain at a node beside the singular node
    Grid g = Grid::unit_square(127);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
    GridFunction u = green_apply(m);
    auto [ci, cj] = nearest_interior_node(g, 0.5, 0.5);
    const int xi = ci + 1, xj = cj;
    double worst = 0.0;
    double prev = -1e300;
    for (int n = 8; n <= 63; ++n) {
      auto [vn, vn1] = check_superharmonic_monotonicity(u, xi, xj, n);
      worst = std::max({worst, vn - vn1, vn1 - u.at(xi, xj)});
      worst = std::max(worst, prev - vn);
      prev = vn;
    }
    const double slack = 4.0 * g.h() * g.h() * linf_norm(u);
    return InvariantRow{"mollifier: superharmonic chain v_n <= v_{n+1} <= u(x)", worst, slack,
                        worst <= slack};
  });

  tasks.push_back([]() {
    Grid g = Grid::unit_square(127);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
    DominationReport rep = check_green_domination(m, 10);
    return InvariantRow{"mollifier: G(R m) <= (1+tol) G(m), center atom", rep.c_est, 1.05,
                        rep.holds};
  });

  // --- semilinear / a priori ---
  tasks.push_back([pi]() {
    Grid g = Grid::unit_square(63);
    GridFunction dens = smooth_bump(g);
    dens *= 2.0 * pi * pi;
    Measure m = Measure::density_only(dens);
    SolveReport rep = solve(Nonlinearity::zero(), m);
    GridFunction exact = smooth_bump(g);
    const double err = linf_norm(rep.u - exact);
    return InvariantRow{"linear solve matches sin sin manufactured solution", err, 1e-3,
                        err < 1e-3};
  });

  tasks.push_back([]() {
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
    Nonlinearity f = Nonlinearity::power(3);
    SolveReport rep = solve(f, m);
    const double res = green_representation_residual(rep.u, f, m);
    return InvariantRow{"green representation residual of solver output", res, 1e-7,
                        res < 1e-7};
  });

  tasks.push_back([]() {
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0) +
                Measure::density_only(GridFunction(g, 0.5));
    Nonlinearity f = Nonlinearity::exponential(1.0);
    SolveReport rep = solve(f, m);
    const bool sub = verify_subsolution(rep.u, f, m);
    const bool super = verify_supersolution(rep.u, f, m);
    // u = 0 is a subsolution under (B) with m >= 0
    const bool zero_sub = verify_subsolution(GridFunction(g), f, m);
    const bool ok = sub && super && zero_sub;
    return InvariantRow{"sub/supersolution checks on solver output and u=0", ok ? 0.0 : 1.0,
                        0.5, ok};
  });

  tasks.push_back([]() {
    // uniqueness: two cold solves agree
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.45, 0.55, 2.0);
    Nonlinearity f = Nonlinearity::exponential(2.0);
    SolveReport a = solve(f, m), b = solve(f, m);
    const double d = linf_norm(a.u - b.u);
    return InvariantRow{"uniqueness: repeated solves agree", d, 1e-10, d < 1e-10};
  });

  tasks.push_back([]() {
    // truncation ladder is nonincreasing for m >= 0
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 4 * 3.14159265358979323846);
    Nonlinearity f = Nonlinearity::exponential(2.0);
    GridFunction prev(g, 1e300);
    double worst = 0.0;
    GridFunction u(g);
    bool first = true;
    for (int j = 0; j < 12; ++j) {
      SolveOptions opts;
      opts.warm_start = first ? nullptr : &u;
      SolveReport rep = solve(f.truncate_below(std::ldexp(1.0, j)), m, opts);
      u = rep.u;
      if (!first)
        for (std::size_t k = 0; k < u.values().size(); ++k)
          worst = std::max(worst, u[k] - prev[k]);
      prev = u;
      first = false;
    }
    return InvariantRow{"truncation iterates nonincreasing (m >= 0)", worst, 1e-9,
                        worst < 1e-9};
  });

  tasks.push_back([]() {
    // sandwich: -f^- and f^+ solutions bracket the f solution
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0) -
                Measure::density_only(GridFunction(g, 0.8));
    Nonlinearity f = Nonlinearity::linear();
    SolveReport mid = solve(f, m);
    SolveReport lo = solve(f.negative_part_only(), m);
    SolveReport hi = solve(f.positive_part(), m);
    double worst = 0.0;
    for (std::size_t k = 0; k < mid.u.values().size(); ++k)
      worst = std::max({worst, lo.u[k] - mid.u[k], mid.u[k] - hi.u[k]});
    return InvariantRow{"sandwich: v (-f^-) <= u (f) <= w (f^+)", worst, 1e-9, worst < 1e-9};
  });

  tasks.push_back([]() {
    // a priori ratio across a refinement family
    Nonlinearity f = Nonlinearity::power(3);
    std::vector<double> ratios;
    for (int n : {31, 63, 127}) {
      Grid g = Grid::unit_square(n);
      Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
      SolveOptions opts;
      opts.q = 1.2;
      SolveReport rep = solve(f, m, opts);
      AprioriData d = check_apriori_bound(rep, f, m, 1.2);
      ratios.push_back(d.lhs / d.rhs);
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    const double var = (hi - lo) / hi;
    return InvariantRow{"a priori ratio varies < 20% across grids", var, 0.20, var < 0.20};
  });

  // --- reduction / projection ---
  tasks.push_back([]() {
    // admissible atom is extracted unchanged
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
    ReductionResult r = reduce_by_truncation(Nonlinearity::power(3), m);
    const double err = std::abs(r.extracted.atoms().front().mass - 1.0);
    return InvariantRow{"reduction fixes admissible atom (power 3, mass 1)", err, 0.01,
                        r.converged && err < 0.01};
  });

  tasks.push_back([pi]() {
    // supercritical exponential: mass reduced toward 4 pi / a
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 4 * pi);
    ReductionResult r = reduce_by_truncation(Nonlinearity::exponential(2.0), m);
    const double err = std::abs(r.extracted.atoms().front().mass - 2 * pi);
    return InvariantRow{"reduction eats supercritical mass (exp 2, 4pi -> ~2pi)", err, 0.5,
                        r.converged && err < 0.5};
  });

  tasks.push_back([pi]() {
    // two-scheme agreement
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 4 * pi);
    Nonlinearity f = Nonlinearity::exponential(2.0);
    ReductionResult a = reduce_by_truncation(f, m);
    ReductionResult b = reduce_by_mollification(f, m);
    const double gap = l1_distance(a.u_star, b.u_star) / l1_norm(a.u_star);
    return InvariantRow{"two-scheme l1 agreement (supercritical)", gap, 0.02, gap < 0.02};
  });

  tasks.push_back([pi]() {
    // order: extracted <= mu for m >= 0 under (B)
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 4 * pi) +
                Measure::density_only(GridFunction(g, 1.0));
    ReductionResult r = reduce_by_truncation(Nonlinearity::exponential(2.0), m);
    double worst = r.extracted.atoms().front().mass - 4 * pi;
    // density part must not exceed mu_d either
    for (std::size_t k = 0; k < r.extracted.density().values().size(); ++k)
      worst = std::max(worst, r.extracted.density()[k] - 1.0 - 1e-6);
    return InvariantRow{"order: extracted <= mu (m >= 0, flag B)", worst, 1e-6, worst < 1e-6};
  });

  tasks.push_back([pi]() {
    // eq.propb identity suite on the mixed case
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 4 * pi) +
                Measure::density_only(GridFunction(g, 1.0));
    IdentityReport rep = check_reduction_identities(Nonlinearity::exponential(2.0), m);
    double worst = 0.0;
    bool pass = true;
    for (const auto& row : rep.rows) {
      worst = std::max(worst, row.discrepancy - row.threshold);
      pass = pass && row.pass;
    }
    return InvariantRow{"reduction identities (mu+/mu_c/mu_d/|mu*|)", worst, 0.0, pass};
  });

  tasks.push_back([]() {
    // Lemma-style invariance under a bounded perturbation of f
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
    Nonlinearity f1 = Nonlinearity::power(3);
    Nonlinearity f2 =
        f1.shifted_by([](double x, double y) { return -0.25 * x * y; }, "bounded");
    const double tv = lemma31_invariance(f1, f2, m);
    return InvariantRow{"invariance: |f1-f2| bounded keeps the reduction", tv, 0.02,
                        tv < 0.02};
  });

  tasks.push_back([pi]() {
    // projection fixes a good (pure density) measure
    Grid g = Grid::unit_square(63);
    GridFunction dens = smooth_bump(g);
    Measure m = Measure::density_only(dens);
    Measure p = project(Nonlinearity::exponential(2.0), m);
    const double tv = total_variation(m - p);
    return InvariantRow{"projection fixes good measures", tv, 1e-6, tv < 1e-6};
  });

  tasks.push_back([pi]() {
    // signed pair: positive atom reduced, negative atom untouched
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.35, 0.35, 4 * pi) +
                Measure::dirac(g, 0.65, 0.65, -4 * pi);
    Measure p = project(Nonlinearity::exponential(2.0), m);
    double pos_mass = 0.0, neg_mass = 0.0;
    for (const Atom& a : p.atoms()) {
      if (a.x < 0.5) pos_mass = a.mass;
      else neg_mass = a.mass;
    }
    const double err_neg = std::abs(neg_mass + 4 * pi);
    const bool pos_reduced = pos_mass < 4 * pi - 1.0 && pos_mass > 2 * pi - 1.5;
    return InvariantRow{"projection: Pi(4pi d1 - 4pi d2) ~ 2pi d1 - 4pi d2", err_neg, 1e-6,
                        pos_reduced && err_neg < 1e-6};
  });

  tasks.push_back([pi]() {
    // project vs variant on the signed corpus
    Grid g = Grid::unit_square(63);
    Measure m = Measure::dirac(g, 0.35, 0.35, 4 * pi) +
                Measure::dirac(g, 0.65, 0.65, -4 * pi);
    Nonlinearity f = Nonlinearity::exponential(2.0);
    ReductionOptions opts;
    Measure a = project(f, m, opts);
    Measure b = project_variant(f, m, opts);
    const double tv = total_variation(a - b);
    return InvariantRow{"project vs project_variant TV agreement", tv, 1e-6, tv < 1e-6};
  });

  tasks.push_back([pi]() {
    // additivity of Pi on mutually singular parts
    Grid g = Grid::unit_square(63);
    GridFunction left(g);
    for (int i = 0; i < g.n() / 2 - 2; ++i)
      for (int j = 0; j < g.n(); ++j) left.at(i, j) = 0.8;
    Measure a = Measure::density_only(left) + Measure::dirac(g, 0.7, 0.3, 1.0);
    Measure b = Measure::dirac(g, 0.7, 0.7, -2.0);
    if (!mutually_singular(a, b))
      return InvariantRow{"projection additivity on mutually singular parts", 1.0, 0.0, false};
    Nonlinearity f = Nonlinearity::power(3);
    Measure lhs = project(f, a + b);
    Measure rhs = project(f, a) + project(f, b);
    const double tv = total_variation(lhs - rhs);
    return InvariantRow{"projection additivity on mutually singular parts", tv, 1e-6,
                        tv < 1e-6};
  });

  tasks.push_back([pi]() {
    // admissibility verdict transition for exp(1): threshold at 4pi
    std::vector<int> ladder = {63, 127, 255};
    Nonlinearity f = Nonlinearity::exponential(1.0);
    const double masses[4] = {2 * pi, 3 * pi, 5 * pi, 6 * pi};
    const Admissibility want[4] = {Admissibility::admissible, Admissibility::admissible,
                                   Admissibility::not_admissible,
                                   Admissibility::not_admissible};
    bool ok = true;
    for (int k = 0; k < 4; ++k) {
      const double mm = masses[k];
      AdmissibilityVerdict v = admissibility_check(
          f, [mm](const Grid& g) { return Measure::dirac(g, 0.5, 0.5, mm); }, ladder);
      ok = ok && (v.verdict == want[k]);
    }
    return InvariantRow{"admissibility transition between 3pi and 5pi (a=1)", ok ? 0.0 : 1.0,
                        0.5, ok};
  });

  tasks.push_back([pi]() {
    // jordan / diffuse-concentrated / TV invariants on a mixed measure
    Grid g = Grid::unit_square(63);
    GridFunction d = smooth_bump(g);
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) d.at(i, j) -= 0.4;
    Measure m = Measure::density_only(d) + Measure::dirac(g, 0.3, 0.6, -1.5) +
                Measure::dirac(g, 0.7, 0.4, 2.5);
    auto [p, ng] = jordan_decompose(m);
    double worst = std::abs(total_variation(m) - total_variation(p) - total_variation(ng));
    worst = std::max(worst, total_variation(m - (p - ng)));
    auto [dif, con] = split_diffuse_concentrated(m);
    worst = std::max(worst, total_variation(m - (dif + con)));
    if (!mutually_singular(p, ng)) worst = std::max(worst, 1.0);
    const double tri = total_variation(p + ng) - total_variation(p) - total_variation(ng);
    worst = std::max(worst, std::abs(tri));
    return InvariantRow{"measure decompositions and TV axioms", worst, 1e-12, worst < 1e-12};
  });

  // run everything
  std::vector<InvariantRow> rows(tasks.size());
  run_indexed(tasks.size(), jobs, [&](std::size_t k) { rows[k] = tasks[k](); });

  bool all = true;
  for (const auto& r : rows) all = all && r.pass;
  std::printf("verify: %zu corpus rows\n", rows.size());
  print_invariants(rows);
  std::printf("verify: %s\n", all ? "ALL PASS" : "FAILURES PRESENT");

  json report = provenance(cfg, "verify");
  report["rows"] = invariants_json(rows);
  report["all_pass"] = all;
  atomic_write(cfg.out / "report.json", report.dump(2) + "\n");
  return all ? 0 : 1;
}

}  // namespace mplab
