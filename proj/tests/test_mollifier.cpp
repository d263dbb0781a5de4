#include <doctest.h>

#include <cmath>

#include "mplab/green.hpp"
#include "mplab/mollifier.hpp"

using namespace mplab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("kernel construction: mass, symmetry, support, normalization") {
  Grid g = Grid::unit_square(127);
  for (int n : {4, 8, 16, 32, 64}) {
    MollifierKernel k = MollifierKernel::build(n, g);
    CHECK(std::abs(k.discrete_mass(g) - 1.0) < 1e-12);
    const int K = k.stencil_radius();
    CHECK(K == static_cast<int>(std::ceil(1.0 / (n * g.h()))));
    for (int di = -K; di <= K; ++di)
      for (int dj = -K; dj <= K; ++dj) {
        CHECK(k.weight(di, dj) >= 0.0);
        CHECK(k.weight(di, dj) == k.weight(-di, dj));
        CHECK(k.weight(di, dj) == k.weight(dj, di));
      }
  }
  // doubling n halves the stencil radius (up to the ceiling)
  MollifierKernel k8 = MollifierKernel::build(8, g);
  MollifierKernel k16 = MollifierKernel::build(16, g);
  CHECK(k8.stencil_radius() == 16);
  CHECK(k16.stencil_radius() == 8);

  // too narrow for the grid
  CHECK_THROWS_AS(MollifierKernel::build(65, g), std::invalid_argument);

  // alpha_2(r) = 2 pi r: for j = 1 on [0,1) the continuum c equals 1/pi
  Grid coarse = Grid::unit_square(31);
  // (bump profile has no closed form; cosine profile checks the quadrature)
  MollifierKernel kc = MollifierKernel::build(8, coarse, MollifierProfile::cosine);
  // int_0^1 (1 + cos(pi r)) 2 pi r dr = pi + 2 pi (pi^2/4 - 2)/pi^2... checked numerically
  double quad = 0.0;
  const int panels = 200000;
  for (int q = 0; q < panels; ++q) {
    const double r = (q + 0.5) / panels;
    quad += (1.0 + std::cos(kPi * r)) * 2.0 * kPi * r;
  }
  quad /= panels;
  CHECK(kc.continuum_normalization() == doctest::Approx(1.0 / quad).epsilon(1e-6));
}

TEST_CASE("mollified interior atom keeps unit mass inside a 1/n ball") {
  Grid g = Grid::unit_square(63);
  Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
  MollifierKernel k = MollifierKernel::build(8, g);
  Measure r = mollify_measure(m, k, g);
  CHECK(r.atoms().empty());
  double mass = 0.0, outside = 0.0;
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      mass += r.density().at(i, j);
      if (std::hypot(g.x(i) - 0.5, g.y(j) - 0.5) > 1.0 / 8 + g.h())
        outside += std::abs(r.density().at(i, j));
    }
  CHECK(mass * g.h() * g.h() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(outside == 0.0);

  Measure z = mollify_measure(Measure::zero(g), k, g);
  CHECK(total_variation(z) == 0.0);
}

TEST_CASE("smooth density converges in L1 at second order") {
  Grid g = Grid::unit_square(127);
  GridFunction dens = GridFunction::sample(
      g, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
  double prev = 0.0;
  std::vector<double> dists;
  for (int n : {8, 16, 32, 64}) {
    MollifierKernel k = MollifierKernel::build(n, g);
    GridFunction md = mollify_field(dens, k);
    dists.push_back(l1_distance(md, dens));
  }
  (void)prev;
  CHECK(dists[1] < 1e-2);  // already small at n = 16
  // fitted slope of log dist vs log n close to -2
  const double slope01 = std::log2(dists[0] / dists[1]);
  const double slope12 = std::log2(dists[1] / dists[2]);
  CHECK(slope01 > 1.7);
  CHECK(slope01 < 2.3);
  CHECK(slope12 > 1.7);
  CHECK(slope12 < 2.3);
}

TEST_CASE("constants are reproduced at interior nodes") {
  Grid g = Grid::unit_square(63);
  GridFunction ones(g, 1.0);
  auto [vn, vn1] = check_superharmonic_monotonicity(ones, 31, 31, 16);
  CHECK(vn == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(vn1 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("superharmonic monotone chain on the Green potential") {
  Grid g = Grid::unit_square(127);
  Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
  GridFunction u = green_apply(m);
  auto [ci, cj] = nearest_interior_node(g, 0.5, 0.5);
  const int xi = ci + 1;
  const double slack = 4.0 * g.h() * g.h() * linf_norm(u);
  double prev_vn = -1e300;
  for (int n = 8; n <= 63; n += 5) {
    auto [vn, vn1] = check_superharmonic_monotonicity(u, xi, cj, n);
    CHECK(vn <= vn1 + slack);
    CHECK(vn1 <= u.at(xi, cj) + slack);
    CHECK(prev_vn <= vn + slack);
    prev_vn = vn;
  }
  CHECK_THROWS_AS(check_superharmonic_monotonicity(u, 0, 0, 8), std::invalid_argument);
}

TEST_CASE("subharmonic fields reverse the chain") {
  Grid g = Grid::unit_square(127);
  GridFunction u = GridFunction::sample(g, [](double x, double y) {
    const double dx = x - 0.5, dy = y - 0.5;
    return -(dx * dx + dy * dy);
  });
  // -Delta_h u = 4 > 0... sign: u subharmonic means -Delta u <= 0
  GridFunction lap = laplacian_apply(u);
  CHECK(lap.at(63, 63) < 0.0);
  auto [vn, vn1] = check_superharmonic_monotonicity(u, 63, 63, 16);
  const double slack = 4.0 * g.h() * g.h() * linf_norm(u);
  CHECK(vn >= vn1 - slack);
  CHECK(vn1 >= u.at(63, 63) - slack);
}

TEST_CASE("green domination for interior positive data") {
  Grid g = Grid::unit_square(127);
  Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
  DominationReport rep = check_green_domination(m, 10);
  CHECK(rep.holds);
  CHECK(rep.c_est <= 1.05);
  CHECK(rep.c_est > 0.5);

  DominationReport zero = check_green_domination(Measure::zero(g), 10);
  CHECK(zero.holds);

  GridFunction smooth = GridFunction::sample(
      g, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
  DominationReport sm = check_green_domination(Measure::density_only(smooth), 16);
  CHECK(std::abs(sm.c_est - 1.0) < 0.05);

  CHECK_THROWS_AS(check_green_domination(Measure::dirac(g, 0.5, 0.5, -1.0), 10),
                  std::invalid_argument);
}

TEST_CASE("mollification is positive, monotone and linear") {
  Grid g = Grid::unit_square(63);
  MollifierKernel k = MollifierKernel::build(8, g);
  Measure a = Measure::dirac(g, 0.4, 0.4, 1.0);
  Measure b = a + Measure::density_only(GridFunction(g, 0.5));
  GridFunction ra = mollify_field(discretize_rhs(a), k);
  GridFunction rb = mollify_field(discretize_rhs(b), k);
  for (std::size_t q = 0; q < ra.values().size(); ++q) {
    CHECK(ra[q] >= 0.0);
    CHECK(ra[q] <= rb[q] + 1e-12);
  }
  GridFunction lhs = mollify_field(discretize_rhs(a.scaled(2.0) + b.scaled(-0.5)), k);
  for (std::size_t q = 0; q < ra.values().size(); ++q)
    CHECK(lhs[q] == doctest::Approx(2.0 * ra[q] - 0.5 * rb[q]).epsilon(1e-12));
}

TEST_CASE("default smoothing start follows the atom support") {
  Grid g = Grid::unit_square(63);
  CHECK(default_mollification_start(Measure::dirac(g, 0.5, 0.5, 1.0)) == 8);
  CHECK(default_mollification_start(Measure::dirac(g, 0.9, 0.5, 1.0)) == 40);
  CHECK(default_mollification_start(Measure::density_only(GridFunction(g, 1.0))) == 8);
}
