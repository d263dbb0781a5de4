#include "mplab/config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mplab/io.hpp"

namespace mplab {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ConfigError("config key '" + key + "': " + why);
}

double num(const json& j, const std::string& key, double fallback,
           bool required = false) {
  if (!j.contains(key)) {
    if (required) bad(key, "missing");
    return fallback;
  }
  if (!j[key].is_number()) bad(key, "expected a number");
  return j[key].get<double>();
}

}  // namespace

Measure MeasureSpec::instantiate(const Grid& g) const {
  GridFunction density(g);
  switch (kind) {
    case DensityKind::zero:
      break;
    case DensityKind::constant:
      for (double& v : density.values()) v = constant;
      break;
    case DensityKind::expression: {
      const std::string vars[2] = {"x", "y"};
      Expression e = Expression::parse(expression, vars);
      for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j) {
          const double xy[2] = {g.x(i), g.y(j)};
          density.at(i, j) = e.eval(xy);
        }
      break;
    }
    case DensityKind::grid_values: {
      if (static_cast<int>(values.size()) != g.n())
        throw ConfigError("measure density 'values' rows (" + std::to_string(values.size()) +
                          ") do not match grid n=" + std::to_string(g.n()));
      for (int i = 0; i < g.n(); ++i) {
        if (static_cast<int>(values[static_cast<std::size_t>(i)].size()) != g.n())
          throw ConfigError("measure density 'values' row length mismatch");
        for (int j = 0; j < g.n(); ++j)
          density.at(i, j) = values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
      break;
    }
    case DensityKind::file:
      density = read_grid_function_csv(file, g);
      break;
  }
  return Measure(std::move(density), atoms);
}

Nonlinearity FSpec::instantiate() const {
  if (family == "zero") return Nonlinearity::zero();
  if (family == "linear") return Nonlinearity::linear();
  if (family == "power") return Nonlinearity::power(p);
  if (family == "exp") return Nonlinearity::exponential(a);
  if (family == "custom") {
    try {
      return Nonlinearity::custom(expression);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("f.expression: ") + e.what());
    }
  }
  throw ConfigError("f.family: unknown family '" + family + "'");
}

namespace {

MeasureSpec parse_measure(const json& j, const std::filesystem::path& base_dir) {
  MeasureSpec spec;
  json m = j;
  if (m.contains("file")) {
    std::filesystem::path p = base_dir / m["file"].get<std::string>();
    std::ifstream in(p);
    if (!in) throw ConfigError("measure.file: cannot open " + p.string());
    try {
      m = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError("measure.file " + p.string() + ": " + e.what());
    }
  }
  if (m.contains("density")) {
    const json& d = m["density"];
    if (!d.contains("kind")) bad("measure.density.kind", "missing");
    const std::string kind = d["kind"].get<std::string>();
    if (kind == "zero") {
      spec.kind = MeasureSpec::DensityKind::zero;
    } else if (kind == "constant") {
      spec.kind = MeasureSpec::DensityKind::constant;
      spec.constant = num(d, "value", 0.0, true);
    } else if (kind == "expression") {
      spec.kind = MeasureSpec::DensityKind::expression;
      if (!d.contains("expr")) bad("measure.density.expr", "missing");
      spec.expression = d["expr"].get<std::string>();
      const std::string vars[2] = {"x", "y"};
      try {
        Expression::parse(spec.expression, vars);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("measure.density.expr: ") + e.what());
      }
    } else if (kind == "grid") {
      spec.kind = MeasureSpec::DensityKind::grid_values;
      if (!d.contains("values")) bad("measure.density.values", "missing");
      spec.values = d["values"].get<std::vector<std::vector<double>>>();
    } else if (kind == "file") {
      spec.kind = MeasureSpec::DensityKind::file;
      if (!d.contains("path")) bad("measure.density.path", "missing");
      spec.file = base_dir / d["path"].get<std::string>();
    } else {
      bad("measure.density.kind", "unknown kind '" + kind + "'");
    }
  }
  if (m.contains("atoms")) {
    for (const json& a : m["atoms"]) {
      spec.atoms.push_back(Atom{num(a, "x", 0.0, true), num(a, "y", 0.0, true),
                                num(a, "mass", 0.0, true)});
    }
  }
  return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), path.has_parent_path() ? path.parent_path() : ".");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text,
                                                  const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  ExperimentConfig c;
  if (j.contains("f")) {
    const json& f = j["f"];
    if (!f.contains("family")) bad("f.family", "missing");
    c.f.family = f["family"].get<std::string>();
    c.f.p = num(f, "p", c.f.p);
    c.f.a = num(f, "a", c.f.a);
    if (f.contains("expr")) c.f.expression = f["expr"].get<std::string>();
    c.f.instantiate();  // validate eagerly
  }
  if (j.contains("measure")) c.measure = parse_measure(j["measure"], base_dir);
  if (j.contains("bounds")) {
    const json& b = j["bounds"];
    c.bounds = Rect{num(b, "x_min", 0.0), num(b, "x_max", 1.0), num(b, "y_min", 0.0),
                    num(b, "y_max", 1.0)};
  }
  if (j.contains("grids")) {
    c.grids.clear();
    for (const json& g : j["grids"]) {
      if (!g.is_number_integer()) bad("grids", "expected integers");
      c.grids.push_back(g.get<int>());
    }
    if (c.grids.empty()) bad("grids", "must not be empty");
    for (std::size_t k = 0; k + 1 < c.grids.size(); ++k)
      if (c.grids[k] >= c.grids[k + 1]) bad("grids", "must be strictly increasing");
  }
  if (j.contains("scheme")) {
    c.scheme = j["scheme"].get<std::string>();
    if (c.scheme != "truncation" && c.scheme != "mollification" && c.scheme != "both")
      bad("scheme", "expected truncation | mollification | both");
  }
  c.q = num(j, "q", c.q);
  if (!(c.q >= 1.0 && c.q < 2.0)) bad("q", "must lie in [1, 2)");
  if (j.contains("mollifier_profile")) {
    const std::string p = j["mollifier_profile"].get<std::string>();
    if (p == "bump") c.mollifier_profile = MollifierProfile::bump;
    else if (p == "cosine") c.mollifier_profile = MollifierProfile::cosine;
    else bad("mollifier_profile", "expected bump | cosine");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    c.reduction.tol_seq_rel_truncation =
        num(t, "tol_seq_rel_truncation", c.reduction.tol_seq_rel_truncation);
    c.reduction.tol_seq_rel_mollification =
        num(t, "tol_seq_rel_mollification", c.reduction.tol_seq_rel_mollification);
    c.reduction.solver.tol_factor = num(t, "newton_tol_factor", c.reduction.solver.tol_factor);
    c.cauchy_tol = num(t, "cauchy_tol", c.cauchy_tol);
    c.divergence_threshold = num(t, "divergence_threshold", c.divergence_threshold);
    for (double v : {c.reduction.tol_seq_rel_truncation, c.reduction.tol_seq_rel_mollification,
                     c.reduction.solver.tol_factor, c.cauchy_tol, c.divergence_threshold})
      if (!(v > 0.0)) bad("tolerances", "must be positive");
  }
  if (j.contains("truncation"))
    c.reduction.max_truncation_levels =
        static_cast<int>(num(j["truncation"], "max_levels", c.reduction.max_truncation_levels));
  if (j.contains("mollification"))
    c.reduction.mollification_start =
        static_cast<int>(num(j["mollification"], "n0", c.reduction.mollification_start));
  if (j.contains("richardson")) {
    c.richardson_beta_min = num(j["richardson"], "beta_min", c.richardson_beta_min);
    c.richardson_beta_max = num(j["richardson"], "beta_max", c.richardson_beta_max);
  }
  if (j.contains("seed")) c.seed = j["seed"].get<unsigned>();
  if (j.contains("out")) c.out = base_dir / j["out"].get<std::string>();

  for (int n : c.grids) Grid::build(c.bounds, n);  // validate geometry early
  return c;
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["f"] = {{"family", f.family}, {"p", f.p}, {"a", f.a}, {"expr", f.expression}};
  json atoms = json::array();
  for (const Atom& a : measure.atoms)
    atoms.push_back({{"x", a.x}, {"y", a.y}, {"mass", a.mass}});
  j["measure"] = {{"kind", static_cast<int>(measure.kind)},
                  {"constant", measure.constant},
                  {"expr", measure.expression},
                  {"file", measure.file.string()},
                  {"atoms", atoms}};
  j["bounds"] = {bounds.x_min, bounds.x_max, bounds.y_min, bounds.y_max};
  j["grids"] = grids;
  j["scheme"] = scheme;
  j["q"] = q;
  j["profile"] = mollifier_profile == MollifierProfile::bump ? "bump" : "cosine";
  j["tol"] = {reduction.tol_seq_rel_truncation, reduction.tol_seq_rel_mollification,
              reduction.solver.tol_factor, cauchy_tol, divergence_threshold};
  j["trunc_max"] = reduction.max_truncation_levels;
  j["moll_n0"] = reduction.mollification_start;
  j["richardson"] = {richardson_beta_min, richardson_beta_max};
  j["seed"] = seed;
  return j.dump();
}

}  // namespace mplab
