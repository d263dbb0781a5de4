#include "mplab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mplab {

Grid Grid::build(const Rect& b, int n) {
  if (n < 3) throw std::invalid_argument("Grid: n must be >= 3, got " + std::to_string(n));
  if (!(b.x_max > b.x_min) || !(b.y_max > b.y_min))
    throw std::invalid_argument("Grid: degenerate bounds");
  const double hx = (b.x_max - b.x_min) / (n + 1);
  const double hy = (b.y_max - b.y_min) / (n + 1);
  if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy))
    throw std::invalid_argument("Grid: cells must be square; got hx=" + std::to_string(hx) +
                                " hy=" + std::to_string(hy));
  return Grid(b, n, hx);
}

double Grid::boundary_distance(int i, int j) const {
  const double dx = std::min(x(i) - bounds_.x_min, bounds_.x_max - x(i));
  const double dy = std::min(y(j) - bounds_.y_min, bounds_.y_max - y(j));
  return std::min(dx, dy);
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_grid(grid_, o.grid_, "GridFunction::operator+=");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] += o.v_[k];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_grid(grid_, o.grid_, "GridFunction::operator-=");
  for (std::size_t k = 0; k < v_.size(); ++k) v_[k] -= o.v_[k];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

bool GridFunction::all_finite() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

GridFunction laplacian_apply(const GridFunction& u) {
  const Grid& g = u.grid();
  const int n = g.n();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  GridFunction out(g);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 4.0 * u.at(i, j);
      if (i > 0) s -= u.at(i - 1, j);
      if (i < n - 1) s -= u.at(i + 1, j);
      if (j > 0) s -= u.at(i, j - 1);
      if (j < n - 1) s -= u.at(i, j + 1);
      out.at(i, j) = s * inv_h2;
    }
  }
  return out;
}

Norms norms(const GridFunction& u, double q) {
  if (!(q >= 1.0 && q < 2.0))
    throw std::invalid_argument("norms: q must lie in [1, 2), got " + std::to_string(q));
  const Grid& g = u.grid();
  const int n = g.n();
  const double h = g.h();
  Norms out;
  double sq = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(u.at(i, j));
      out.l1 += a;
      out.linf = std::max(out.linf, a);
      sq += std::pow(a, q);
    }
  }
  out.l1 *= h * h;
  // forward differences, including the jumps across the zero boundary
  auto value = [&](int i, int j) -> double {
    if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
    return u.at(i, j);
  };
  for (int i = -1; i < n; ++i)
    for (int j = 0; j < n; ++j)
      sq += std::pow(std::abs(value(i + 1, j) - value(i, j)) / h, q);
  for (int i = 0; i < n; ++i)
    for (int j = -1; j < n; ++j)
      sq += std::pow(std::abs(value(i, j + 1) - value(i, j)) / h, q);
  out.w1q = std::pow(h * h * sq, 1.0 / q);
  return out;
}

double l1_norm(const GridFunction& u) {
  double s = 0.0;
  for (double x : u.values()) s += std::abs(x);
  return s * u.grid().h() * u.grid().h();
}

double linf_norm(const GridFunction& u) {
  double s = 0.0;
  for (double x : u.values()) s = std::max(s, std::abs(x));
  return s;
}

double l1_distance(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a.grid(), b.grid(), "l1_distance");
  double s = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) s += std::abs(a[k] - b[k]);
  return s * a.grid().h() * a.grid().h();
}

double dot(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  double s = 0.0;
  for (std::size_t k = 0; k < a.values().size(); ++k) s += a[k] * b[k];
  return s * a.grid().h() * a.grid().h();
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace mplab
