#include <doctest.h>

#include <cmath>

#include "mplab/measure.hpp"

using namespace mplab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("nearest node placement with lower-index ties") {
  Grid g = Grid::unit_square(3);  // nodes at 0.25, 0.5, 0.75
  auto [i, j] = nearest_interior_node(g, 0.5, 0.75);
  CHECK(i == 1);
  CHECK(j == 2);
  // exact midpoint between node 0 and node 1 snaps down
  auto [ti, tj] = nearest_interior_node(g, 0.375, 0.25);
  CHECK(ti == 0);
  CHECK(tj == 0);
  // off-center toward boundary clamps to the nearest interior node
  auto [bi, bj] = nearest_interior_node(g, 0.01, 0.99);
  CHECK(bi == 0);
  CHECK(bj == 2);
  CHECK_THROWS_AS(nearest_interior_node(g, -0.1, 0.5), std::invalid_argument);
}

TEST_CASE("measure validation") {
  Grid g = Grid::unit_square(7);
  CHECK_THROWS_AS(Measure::dirac(g, 1.5, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Measure::atoms_only(g, {Atom{0.5, 0.5, 1.0}, Atom{0.5, 0.5, 2.0}}),
                  std::invalid_argument);
}

TEST_CASE("jordan decomposition splits signs and is mutually singular") {
  Grid g = Grid::unit_square(8);
  GridFunction d(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 8; ++j) d.at(i, j) = 2.0;
  for (int i = 4; i < 8; ++i)
    for (int j = 0; j < 8; ++j) d.at(i, j) = -1.0;
  Measure m = Measure::density_only(d) + Measure::dirac(g, 0.3, 0.3, 3.0) +
              Measure::dirac(g, 0.7, 0.7, -1.0);
  auto [pos, neg] = jordan_decompose(m);
  CHECK(pos.atoms().size() == 1);
  CHECK(pos.atoms()[0].mass == 3.0);
  CHECK(neg.atoms().size() == 1);
  CHECK(neg.atoms()[0].mass == 1.0);
  for (double v : pos.density().values()) CHECK(v >= 0.0);
  for (double v : neg.density().values()) CHECK(v >= 0.0);
  CHECK(mutually_singular(pos, neg));
  CHECK(total_variation(m - (pos - neg)) == 0.0);
  CHECK(total_variation(m) ==
        doctest::Approx(total_variation(pos) + total_variation(neg)).epsilon(1e-14));

  auto [pp, nn] = jordan_decompose(pos);
  CHECK(total_variation(nn) == 0.0);
}

TEST_CASE("diffuse/concentrated split recombines exactly") {
  Grid g = Grid::unit_square(9);
  Measure m = Measure::density_only(GridFunction(g, 0.7)) + Measure::dirac(g, 0.4, 0.6, 2.0);
  auto [dif, con] = split_diffuse_concentrated(m);
  CHECK(con.atoms().size() == 1);
  CHECK(l1_norm(con.density()) == 0.0);
  CHECK(dif.atoms().empty());
  CHECK(total_variation(m - (dif + con)) == 0.0);

  auto [d2, c2] = split_diffuse_concentrated(Measure::density_only(GridFunction(g, 1.0)));
  CHECK(total_variation(c2) == 0.0);
  auto [d3, c3] = split_diffuse_concentrated(Measure::dirac(g, 0.5, 0.5, 1.0));
  CHECK(total_variation(d3) == 0.0);
}

TEST_CASE("total variation values and axioms") {
  Grid g = Grid::unit_square(15);
  Measure atom = Measure::dirac(g, 0.5, 0.5, 4.0 * kPi);
  CHECK(total_variation(atom) == doctest::Approx(4.0 * kPi));
  Measure ones = Measure::density_only(GridFunction(g, 1.0));
  CHECK(total_variation(ones) ==
        doctest::Approx(g.h() * g.h() * g.n() * g.n()).epsilon(1e-14));
  CHECK(total_variation(atom - atom) == 0.0);
  // triangle inequality
  CHECK(total_variation(atom + ones) <=
        total_variation(atom) + total_variation(ones) + 1e-14);
  // equality for mutually singular same-sign parts
  CHECK(mutually_singular(atom, ones) == false);  // atom lies in the density support
  Measure shifted = Measure::dirac(g, 0.25, 0.25, 1.5);
  GridFunction halfd(g);
  for (int i = 8; i < 15; ++i)
    for (int j = 0; j < 15; ++j) halfd.at(i, j) = 1.0;
  Measure half = Measure::density_only(halfd);
  CHECK(mutually_singular(shifted, half));
  CHECK(total_variation(shifted + half) ==
        doctest::Approx(total_variation(shifted) + total_variation(half)).epsilon(1e-14));
}

TEST_CASE("discretize_rhs conserves atom mass and is linear") {
  Grid g = Grid::unit_square(9);  // odd n: center node exists
  Measure m = Measure::dirac(g, 0.5, 0.5, 1.0);
  GridFunction r = discretize_rhs(m, g);
  const double inv_h2 = 1.0 / (g.h() * g.h());
  auto [ci, cj] = nearest_interior_node(g, 0.5, 0.5);
  CHECK(r.at(ci, cj) == doctest::Approx(inv_h2));
  double total = 0.0;
  for (double v : r.values()) total += v;
  CHECK(total * g.h() * g.h() == doctest::Approx(1.0).epsilon(1e-14));

  Measure ones = Measure::density_only(GridFunction(g, 1.0));
  GridFunction rd = discretize_rhs(ones);
  for (double v : rd.values()) CHECK(v == 1.0);

  // two atoms snapping to the same node add up
  Measure pair = Measure::atoms_only(
      g, {Atom{0.5, 0.5, 1.0}, Atom{0.5 + g.h() / 8.0, 0.5, 2.0}});
  GridFunction rp = discretize_rhs(pair);
  CHECK(rp.at(ci, cj) == doctest::Approx(3.0 * inv_h2));

  // linearity
  GridFunction lhs = discretize_rhs(m.scaled(2.0) - ones.scaled(0.5));
  for (std::size_t k = 0; k < lhs.values().size(); ++k)
    CHECK(lhs[k] == doctest::Approx(2.0 * r[k] - 0.5 * rd[k]).epsilon(1e-13));

  Grid other = Grid::unit_square(11);
  CHECK_THROWS_AS(discretize_rhs(m, other), std::invalid_argument);
}

TEST_CASE("mutual singularity edge cases") {
  Grid g = Grid::unit_square(9);
  Measure a = Measure::dirac(g, 0.5, 0.5, 1.0);
  Measure b = Measure::dirac(g, 0.5, 0.5, -2.0);
  CHECK(!mutually_singular(a, b));  // same point
  Measure c = Measure::dirac(g, 0.25, 0.25, 1.0);
  CHECK(mutually_singular(a, c));
}
