#include "mplab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mplab {

std::pair<int, int> nearest_interior_node(const Grid& g, double x, double y) {
  const Rect& b = g.bounds();
  if (!(x > b.x_min && x < b.x_max && y > b.y_min && y < b.y_max))
    throw std::invalid_argument("atom outside the open domain");
  auto snap = [&](double t) {
    // continuous index: node i sits at t = i+1
    const double s = t / g.h();
    int i = static_cast<int>(std::ceil(s - 0.5)) - 1;  // ties toward lower index
    return std::clamp(i, 0, g.n() - 1);
  };
  return {snap(x - b.x_min), snap(y - b.y_min)};
}

Measure::Measure(GridFunction density, std::vector<Atom> atoms)
    : density_(std::move(density)), atoms_(std::move(atoms)) {
  if (!density_.all_finite())
    throw std::invalid_argument("Measure: density has non-finite values");
  const Rect& b = density_.grid().bounds();
  for (std::size_t a = 0; a < atoms_.size(); ++a) {
    const Atom& at = atoms_[a];
    if (!(at.x > b.x_min && at.x < b.x_max && at.y > b.y_min && at.y < b.y_max))
      throw std::invalid_argument("Measure: atom outside the open domain");
    for (std::size_t c = 0; c < a; ++c)
      if (atoms_[c].x == at.x && atoms_[c].y == at.y)
        throw std::invalid_argument("Measure: duplicate atom point");
  }
}

Measure Measure::operator-() const { return scaled(-1.0); }

Measure Measure::scaled(double s) const {
  GridFunction d = density_;
  d *= s;
  std::vector<Atom> at = atoms_;
  for (Atom& a : at) a.mass *= s;
  return Measure(std::move(d), std::move(at));
}

Measure operator+(const Measure& a, const Measure& b) {
  require_same_grid(a.grid(), b.grid(), "Measure::operator+");
  GridFunction d = a.density_;
  d += b.density_;
  std::vector<Atom> atoms = a.atoms_;
  for (const Atom& bb : b.atoms_) {
    bool merged = false;
    for (Atom& aa : atoms) {
      if (aa.x == bb.x && aa.y == bb.y) {
        aa.mass += bb.mass;
        merged = true;
        break;
      }
    }
    if (!merged) atoms.push_back(bb);
  }
  std::erase_if(atoms, [](const Atom& a_) { return a_.mass == 0.0; });
  return Measure(std::move(d), std::move(atoms));
}

Measure operator-(const Measure& a, const Measure& b) { return a + (-b); }

std::pair<Measure, Measure> jordan_decompose(const Measure& m) {
  GridFunction pos(m.grid()), neg(m.grid());
  for (std::size_t k = 0; k < m.density().values().size(); ++k) {
    const double v = m.density()[k];
    if (v > 0.0) pos[k] = v;
    else neg[k] = -v;
  }
  std::vector<Atom> pa, na;
  for (const Atom& a : m.atoms()) {
    if (a.mass > 0.0) pa.push_back(a);
    else if (a.mass < 0.0) na.push_back(Atom{a.x, a.y, -a.mass});
  }
  return {Measure(std::move(pos), std::move(pa)), Measure(std::move(neg), std::move(na))};
}

std::pair<Measure, Measure> split_diffuse_concentrated(const Measure& m) {
  return {Measure::density_only(m.density()), Measure::atoms_only(m.grid(), m.atoms())};
}

double total_variation(const Measure& m) {
  double tv = l1_norm(m.density());
  for (const Atom& a : m.atoms()) tv += std::abs(a.mass);
  return tv;
}

GridFunction discretize_rhs(const Measure& m, const Grid& g) {
  require_same_grid(m.grid(), g, "discretize_rhs");
  return discretize_rhs(m);
}

GridFunction discretize_rhs(const Measure& m) {
  const Grid& g = m.grid();
  GridFunction out = m.density();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  for (const Atom& a : m.atoms()) {
    auto [i, j] = nearest_interior_node(g, a.x, a.y);
    out.at(i, j) += a.mass * inv_h2;
  }
  return out;
}

bool mutually_singular(const Measure& a, const Measure& b) {
  require_same_grid(a.grid(), b.grid(), "mutually_singular");
  const Grid& g = a.grid();
  for (std::size_t k = 0; k < a.density().values().size(); ++k)
    if (a.density()[k] != 0.0 && b.density()[k] != 0.0) return false;
  for (const Atom& pa : a.atoms())
    for (const Atom& pb : b.atoms())
      if (pa.x == pb.x && pa.y == pb.y) return false;
  auto atom_in_support = [&](const Atom& at, const GridFunction& dens) {
    auto [i, j] = nearest_interior_node(g, at.x, at.y);
    return dens.at(i, j) != 0.0;
  };
  for (const Atom& pa : a.atoms())
    if (atom_in_support(pa, b.density())) return false;
  for (const Atom& pb : b.atoms())
    if (atom_in_support(pb, a.density())) return false;
  return true;
}

}  // namespace mplab
