#include <doctest.h>

#include <cmath>
#include <random>

#include "mplab/green.hpp"

using namespace mplab;

namespace {
constexpr double kPi = 3.14159265358979323846;

GridFunction sinsin(const Grid& g) {
  return GridFunction::sample(
      g, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
}
}  // namespace

TEST_CASE("green_apply solves the manufactured eigenfunction problem") {
  Grid g = Grid::unit_square(127);
  GridFunction rhs = sinsin(g);
  rhs *= 2.0 * kPi * kPi;
  GridFunction u = green_apply(Measure::density_only(rhs));
  CHECK(linf_norm(u - sinsin(g)) < 1e-3);

  GridFunction z = green_apply(Measure::zero(g));
  CHECK(linf_norm(z) == 0.0);
}

TEST_CASE("green_apply is linear and positivity preserving") {
  Grid g = Grid::unit_square(31);
  Measure a = Measure::dirac(g, 0.4, 0.6, 1.0);
  Measure b = Measure::density_only(GridFunction(g, 1.0));
  GridFunction ua = green_apply(a), ub = green_apply(b);
  GridFunction mix = green_apply(a.scaled(2.0) - b.scaled(0.5));
  CHECK(linf_norm(mix - (2.0 * ua - 0.5 * ub)) < 1e-10);
  for (double v : ua.values()) CHECK(v >= 0.0);
  for (double v : ub.values()) CHECK(v > 0.0);
}

TEST_CASE("discrete maximum principle through the solve") {
  Grid g = Grid::unit_square(31);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  GridFunction rhs(g);
  for (double& v : rhs.values()) v = d(rng);
  GridFunction u = green_apply(Measure::density_only(rhs));
  for (double v : u.values()) CHECK(v >= 0.0);
}

TEST_CASE("near-field log coefficient of the discrete Green function") {
  Grid g = Grid::unit_square(255);
  GridFunction u = green_apply(Measure::dirac(g, 0.5, 0.5, 1.0));
  LogFit fit = fit_log_coefficient(u, 0.5, 0.5, 4.0 * g.h(), 0.1);
  CHECK(fit.coefficient * 2.0 * kPi == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fit.points > 100);
}

TEST_CASE("green domination bridge: G(R m) <= (1+tol) G(m) nodewise") {
  Grid g = Grid::unit_square(63);
  Measure m = Measure::dirac(g, 0.5, 0.5, 2.0);
  DominationReport rep = check_green_domination(m, 8);
  CHECK(rep.holds);
}

TEST_CASE("green representation residual") {
  Grid g = Grid::unit_square(63);
  Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
  GridFunction u = green_apply(m);
  CHECK(green_representation_residual(u, Nonlinearity::zero(), m) < 1e-9);
  CHECK(green_representation_residual(GridFunction(g), Nonlinearity::zero(), Measure::zero(g)) ==
        0.0);
}

TEST_CASE("admissibility: closed-form threshold family at a = 2") {
  // integrand ~ r^{1 - a m0 / (2 pi)} near the atom: threshold mass 4 pi / a
  std::vector<int> ladder = {31, 63, 127};
  Nonlinearity f = Nonlinearity::exponential(2.0);
  auto at_mass = [](double mass) {
    return [mass](const Grid& g) { return Measure::dirac(g, 0.5, 0.5, mass); };
  };
  AdmissibilityVerdict sub = admissibility_check(f, at_mass(kPi), ladder);
  CHECK(sub.verdict == Admissibility::admissible);
  AdmissibilityVerdict super = admissibility_check(f, at_mass(3.0 * kPi), ladder);
  CHECK(super.verdict == Admissibility::not_admissible);
  CHECK(super.growth_exponent > 0.8);

  // bounded density data is always admissible
  AdmissibilityVerdict dens = admissibility_check(
      f, [](const Grid& g) { return Measure::density_only(GridFunction(g, 1.0)); }, ladder);
  CHECK(dens.verdict == Admissibility::admissible);

  std::vector<int> short_ladder = {31, 63};
  CHECK_THROWS_AS(admissibility_check(f, at_mass(1.0), short_ladder), std::invalid_argument);
}

TEST_CASE("admissibility monotone in atom mass for the exponential family") {
  std::vector<int> ladder = {31, 63, 127};
  Nonlinearity f = Nonlinearity::exponential(2.0);
  double prev_exponent = -1.0;
  bool seen_not_admissible = false;
  for (double mass : {0.5 * kPi, 1.5 * kPi, 2.5 * kPi, 3.5 * kPi}) {
    AdmissibilityVerdict v = admissibility_check(
        f, [mass](const Grid& g) { return Measure::dirac(g, 0.5, 0.5, mass); }, ladder);
    if (seen_not_admissible) CHECK(v.verdict == Admissibility::not_admissible);
    if (v.verdict == Admissibility::not_admissible) seen_not_admissible = true;
    CHECK(v.growth_exponent >= prev_exponent - 0.02);
    prev_exponent = v.growth_exponent;
  }
  CHECK(seen_not_admissible);
}

TEST_CASE("factorization cache returns shared instances") {
  Grid g = Grid::unit_square(31);
  auto a = poisson_operator(g);
  auto b = poisson_operator(g);
  CHECK(a.get() == b.get());
  Grid g2 = Grid::build(Rect{0, 2, 0, 2}, 31);
  CHECK(poisson_operator(g2).get() != a.get());
}
