#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace mplab {

struct Rect {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

/// Uniform n x n interior grid over a rectangle with square cells and
/// homogeneous Dirichlet boundary (boundary nodes are eliminated; any
/// off-grid neighbor reads as 0).  Interior node (i,j), 0 <= i,j < n,
/// sits at (x_min + (i+1)h, y_min + (j+1)h) with h = (x_max - x_min)/(n+1).
class Grid {
public:
  static Grid build(const Rect& bounds, int n);
  static Grid unit_square(int n) { return build(Rect{}, n); }

  int n() const { return n_; }
  double h() const { return h_; }
  const Rect& bounds() const { return bounds_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }

  double x(int i) const { return bounds_.x_min + (i + 1) * h_; }
  double y(int j) const { return bounds_.y_min + (j + 1) * h_; }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }

  /// Distance from node (i,j) to the boundary of the rectangle.
  double boundary_distance(int i, int j) const;

  bool operator==(const Grid& o) const {
    return n_ == o.n_ && bounds_.x_min == o.bounds_.x_min &&
           bounds_.x_max == o.bounds_.x_max && bounds_.y_min == o.bounds_.y_min &&
           bounds_.y_max == o.bounds_.y_max;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

private:
  Grid(const Rect& b, int n, double h) : bounds_(b), n_(n), h_(h) {}
  Rect bounds_;
  int n_ = 0;
  double h_ = 0.0;
};

/// Real values on the interior nodes of a Grid, stored row-major in i.
class GridFunction {
public:
  explicit GridFunction(const Grid& g, double fill = 0.0)
      : grid_(g), v_(g.size(), fill) {}

  template <class F>
  static GridFunction sample(const Grid& g, F&& f) {
    GridFunction out(g);
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) out.at(i, j) = f(g.x(i), g.y(j));
    return out;
  }

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n(); }

  double& at(int i, int j) { return v_[grid_.index(i, j)]; }
  double at(int i, int j) const { return v_[grid_.index(i, j)]; }
  double& operator[](std::size_t k) { return v_[k]; }
  double operator[](std::size_t k) const { return v_[k]; }

  std::span<double> values() { return v_; }
  std::span<const double> values() const { return v_; }

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double s);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }

  bool all_finite() const;

private:
  Grid grid_;
  std::vector<double> v_;
};

struct Norms {
  double l1 = 0.0;
  double linf = 0.0;
  double w1q = 0.0;
};

/// Applies the 5-point stencil; returns -Delta_h u (so the output of a
/// Poisson solve feeds back the right-hand side).
GridFunction laplacian_apply(const GridFunction& u);

/// l1 = h^2 sum |u|, linf = max |u|, w1q = (h^2 sum(|Dx+ u|^q + |Dy+ u|^q
/// + |u|^q))^(1/q) with forward differences across the zero boundary.
/// Requires q in [1, 2).
Norms norms(const GridFunction& u, double q);

double l1_norm(const GridFunction& u);
double linf_norm(const GridFunction& u);
double l1_distance(const GridFunction& a, const GridFunction& b);

/// h^2 sum a*b
double dot(const GridFunction& a, const GridFunction& b);

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace mplab
