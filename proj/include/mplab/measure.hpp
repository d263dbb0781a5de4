#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mplab/grid.hpp"

namespace mplab {

/// Point mass strictly inside the domain.
struct Atom {
  double x = 0.0;
  double y = 0.0;
  double mass = 0.0;
};

/// Nearest interior node to a point; ties broken toward the lower index.
/// Throws if the point lies outside the open rectangle.
std::pair<int, int> nearest_interior_node(const Grid& g, double x, double y);

/// Signed bounded measure on the grid's rectangle, modeled as a density
/// field (the diffuse part mu_d, mass per unit area sampled at nodes) plus
/// a finite list of atoms (the concentrated part mu_c).  Atom points are
/// pairwise distinct and strictly interior.
class Measure {
public:
  Measure(GridFunction density, std::vector<Atom> atoms);
  static Measure zero(const Grid& g) { return Measure(GridFunction(g), {}); }
  static Measure density_only(GridFunction d) { return Measure(std::move(d), {}); }
  static Measure atoms_only(const Grid& g, std::vector<Atom> atoms) {
    return Measure(GridFunction(g), std::move(atoms));
  }
  static Measure dirac(const Grid& g, double x, double y, double mass) {
    return atoms_only(g, {Atom{x, y, mass}});
  }

  const Grid& grid() const { return density_.grid(); }
  const GridFunction& density() const { return density_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  Measure operator-() const;
  friend Measure operator+(const Measure& a, const Measure& b);
  friend Measure operator-(const Measure& a, const Measure& b);
  Measure scaled(double s) const;

private:
  GridFunction density_;
  std::vector<Atom> atoms_;
};

/// Per-node / per-atom split into mutually singular nonnegative parts,
/// m = pos - neg.
std::pair<Measure, Measure> jordan_decompose(const Measure& m);

/// (diffuse, concentrated) = (density part, atom part).
std::pair<Measure, Measure> split_diffuse_concentrated(const Measure& m);

/// h^2 sum |density| + sum |mass|.
double total_variation(const Measure& m);

/// Density sampled at nodes; each atom adds mass/h^2 at its nearest
/// interior node.  h^2 * sum(result) reproduces atom masses exactly.
GridFunction discretize_rhs(const Measure& m, const Grid& g);
GridFunction discretize_rhs(const Measure& m);

/// True iff the density supports are node-disjoint, the atom point sets are
/// disjoint, and no atom of one lands in a support cell of the other's density.
bool mutually_singular(const Measure& a, const Measure& b);

}  // namespace mplab
