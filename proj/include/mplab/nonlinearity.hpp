#pragma once

#include <functional>
#include <memory>
#include <string>

#include "mplab/expression.hpp"
#include "mplab/grid.hpp"

namespace mplab {

/// Absorption term f(x, y): x = (px, py) in the domain, y = solution value.
/// Must be non-increasing in y.  Derived forms share the underlying callable.
class Nonlinearity {
public:
  using Fn = std::function<double(double, double, double)>;

  double operator()(double px, double py, double v) const { return fn_(px, py, v); }

  /// d/dy f; central finite difference with step max(1e-6, 1e-6|y|)
  /// when no analytic derivative was provided.
  double dv(double px, double py, double v) const;

  /// Declared condition (B): f(x, y) = 0 for y <= 0.
  bool flag_B() const { return flag_B_; }
  const std::string& name() const { return name_; }

  Nonlinearity truncate_below(double level) const;  // f v (-level)
  Nonlinearity reflect() const;                     // -f(x, -y)
  Nonlinearity positive_part() const;               // max(f, 0)
  Nonlinearity negative_part_only() const;          // min(f, 0) = -f^-

  /// f + g(x) for a spatially varying bounded shift (keeps monotonicity in y).
  Nonlinearity shifted_by(std::function<double(double, double)> g, const std::string& tag) const;

  static Nonlinearity zero();
  static Nonlinearity linear();                // f(y) = -y
  static Nonlinearity power(double p);         // f(y) = -(y^+)^p
  static Nonlinearity exponential(double a);   // f(y) = -((e^{ay} - 1)^+)
  static Nonlinearity custom(const std::string& expr);  // variables x, y, u

  struct Certificate {
    bool monotone_ok = true;
    double max_monotonicity_violation = 0.0;
    bool flag_B_holds = true;
    double max_flag_B_violation = 0.0;
    int samples = 0;
  };

  /// Samples (x, y) on grid nodes (subsampled) times a geometric value
  /// lattice in [-1e6, 1e6]; cannot prove (H) but catches specification
  /// errors.
  Certificate certify(const Grid& g) const;

private:
  Nonlinearity(Fn fn, Fn dfn, bool flagB, std::string name)
      : fn_(std::move(fn)), dfn_(std::move(dfn)), flag_B_(flagB), name_(std::move(name)) {}
  Fn fn_;
  Fn dfn_;  // may be null
  bool flag_B_ = false;
  std::string name_;
};

}  // namespace mplab
