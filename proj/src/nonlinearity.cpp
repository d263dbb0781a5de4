#include "mplab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mplab {

double Nonlinearity::dv(double px, double py, double v) const {
  if (dfn_) return dfn_(px, py, v);
  const double step = std::max(1e-6, 1e-6 * std::abs(v));
  return (fn_(px, py, v + step) - fn_(px, py, v - step)) / (2.0 * step);
}

Nonlinearity Nonlinearity::truncate_below(double level) const {
  Fn f = fn_;
  Fn d = dfn_;
  Fn fn = [f, level](double px, double py, double v) {
    return std::max(f(px, py, v), -level);
  };
  Fn dfn;
  if (d)
    dfn = [f, d, level](double px, double py, double v) {
      return f(px, py, v) > -level ? d(px, py, v) : 0.0;
    };
  return Nonlinearity(std::move(fn), std::move(dfn), flag_B_,
                      name_ + " v (-" + std::to_string(level) + ")");
}

Nonlinearity Nonlinearity::reflect() const {
  Fn f = fn_;
  Fn d = dfn_;
  Fn fn = [f](double px, double py, double v) { return -f(px, py, -v); };
  Fn dfn;
  if (d) dfn = [d](double px, double py, double v) { return d(px, py, -v); };
  return Nonlinearity(std::move(fn), std::move(dfn), false, "reflect(" + name_ + ")");
}

Nonlinearity Nonlinearity::positive_part() const {
  Fn f = fn_;
  Fn d = dfn_;
  Fn fn = [f](double px, double py, double v) { return std::max(f(px, py, v), 0.0); };
  Fn dfn;
  if (d)
    dfn = [f, d](double px, double py, double v) {
      return f(px, py, v) > 0.0 ? d(px, py, v) : 0.0;
    };
  return Nonlinearity(std::move(fn), std::move(dfn), flag_B_, name_ + "^+");
}

Nonlinearity Nonlinearity::negative_part_only() const {
  Fn f = fn_;
  Fn d = dfn_;
  Fn fn = [f](double px, double py, double v) { return std::min(f(px, py, v), 0.0); };
  Fn dfn;
  if (d)
    dfn = [f, d](double px, double py, double v) {
      return f(px, py, v) < 0.0 ? d(px, py, v) : 0.0;
    };
  return Nonlinearity(std::move(fn), std::move(dfn), flag_B_, "-(" + name_ + ")^-");
}

Nonlinearity Nonlinearity::shifted_by(std::function<double(double, double)> g,
                                      const std::string& tag) const {
  Fn f = fn_;
  Fn d = dfn_;
  Fn fn = [f, g](double px, double py, double v) { return f(px, py, v) + g(px, py); };
  Fn dfn;
  if (d) dfn = d;
  return Nonlinearity(std::move(fn), std::move(dfn), false, name_ + "+" + tag);
}

Nonlinearity Nonlinearity::zero() {
  return Nonlinearity([](double, double, double) { return 0.0; },
                      [](double, double, double) { return 0.0; }, true, "zero");
}

Nonlinearity Nonlinearity::linear() {
  return Nonlinearity([](double, double, double v) { return -v; },
                      [](double, double, double) { return -1.0; }, false, "linear");
}

Nonlinearity Nonlinearity::power(double p) {
  Fn fn = [p](double, double, double v) { return v > 0.0 ? -std::pow(v, p) : 0.0; };
  Fn dfn = [p](double, double, double v) {
    return v > 0.0 ? -p * std::pow(v, p - 1.0) : 0.0;
  };
  return Nonlinearity(std::move(fn), std::move(dfn), true, "power(" + std::to_string(p) + ")");
}

Nonlinearity Nonlinearity::exponential(double a) {
  // expm1 for small arguments; the cap keeps exp finite on wild Newton trials
  Fn fn = [a](double, double, double v) {
    return v > 0.0 ? -std::expm1(std::min(a * v, 700.0)) : 0.0;
  };
  Fn dfn = [a](double, double, double v) {
    return v > 0.0 ? -a * std::exp(std::min(a * v, 700.0)) : 0.0;
  };
  return Nonlinearity(std::move(fn), std::move(dfn), true, "exp(" + std::to_string(a) + ")");
}

Nonlinearity Nonlinearity::custom(const std::string& expr) {
  const std::string vars[3] = {"x", "y", "u"};
  auto parsed = std::make_shared<Expression>(Expression::parse(expr, vars));
  Fn fn = [parsed](double px, double py, double v) {
    const double vals[3] = {px, py, v};
    return parsed->eval(vals);
  };
  return Nonlinearity(std::move(fn), nullptr, false, "custom(" + expr + ")");
}

Nonlinearity::Certificate Nonlinearity::certify(const Grid& g) const {
  Certificate c;
  std::vector<double> lattice;
  lattice.push_back(0.0);
  for (double m = 1e-6; m <= 1e6 + 1e-9; m *= 10.0) {
    lattice.push_back(m);
    lattice.push_back(-m);
  }
  std::sort(lattice.begin(), lattice.end());
  const int stride = std::max(1, g.n() / 8);
  const double tol = 1e-12;
  for (int i = 0; i < g.n(); i += stride) {
    for (int j = 0; j < g.n(); j += stride) {
      const double px = g.x(i), py = g.y(j);
      double prev = fn_(px, py, lattice.front());
      for (std::size_t k = 1; k < lattice.size(); ++k) {
        const double cur = fn_(px, py, lattice[k]);
        const double scale = std::max({1.0, std::abs(prev), std::abs(cur)});
        const double viol = cur - prev;  // must be <= 0 up to tolerance
        if (viol > tol * scale) {
          c.monotone_ok = false;
          c.max_monotonicity_violation = std::max(c.max_monotonicity_violation, viol / scale);
        }
        prev = cur;
        ++c.samples;
      }
      for (double v : lattice) {
        if (v > 0.0) continue;
        const double fv = std::abs(fn_(px, py, v));
        if (fv > tol) {
          c.flag_B_holds = false;
          c.max_flag_B_violation = std::max(c.max_flag_B_violation, fv);
        }
      }
    }
  }
  return c;
}

}  // namespace mplab
