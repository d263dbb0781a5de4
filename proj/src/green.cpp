#include "mplab/green.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace mplab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat laplacian_matrix(const Grid& g) {
  const int n = g.n();
  const double inv_h2 = 1.0 / (g.h() * g.h());
  SpMat A(n * n, n * n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(5) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int row = static_cast<int>(g.index(i, j));
      trip.emplace_back(row, row, 4.0 * inv_h2);
      if (i > 0) trip.emplace_back(row, row - n, -inv_h2);
      if (i < n - 1) trip.emplace_back(row, row + n, -inv_h2);
      if (j > 0) trip.emplace_back(row, row - 1, -inv_h2);
      if (j < n - 1) trip.emplace_back(row, row + 1, -inv_h2);
    }
  }
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

}  // namespace

struct PoissonOperator::Impl {
  SpMat matrix;
  Eigen::SimplicialLDLT<SpMat> factor;
};

PoissonOperator::PoissonOperator(const Grid& g) : grid_(g), impl_(std::make_unique<Impl>()) {
  impl_->matrix = laplacian_matrix(g);
  impl_->factor.compute(impl_->matrix);
  if (impl_->factor.info() != Eigen::Success)
    throw SolveError("PoissonOperator: factorization of -Delta_h failed");
}

PoissonOperator::~PoissonOperator() = default;
PoissonOperator::PoissonOperator(PoissonOperator&&) noexcept = default;
PoissonOperator& PoissonOperator::operator=(PoissonOperator&&) noexcept = default;

GridFunction PoissonOperator::solve(const GridFunction& rhs) const {
  require_same_grid(grid_, rhs.grid(), "PoissonOperator::solve");
  Eigen::Map<const Eigen::VectorXd> b(rhs.values().data(),
                                      static_cast<Eigen::Index>(rhs.values().size()));
  Eigen::VectorXd x = impl_->factor.solve(b);
  if (impl_->factor.info() != Eigen::Success)
    throw SolveError("PoissonOperator: back substitution failed");
  const double rel = (impl_->matrix * x - b).cwiseAbs().maxCoeff() /
                     std::max(1.0, b.cwiseAbs().maxCoeff());
  if (rel > 1e-10)
    throw SolveError("PoissonOperator: residual too large", rel);
  GridFunction u(grid_);
  for (std::size_t k = 0; k < u.values().size(); ++k) u[k] = x[static_cast<Eigen::Index>(k)];
  return u;
}

GridFunction PoissonOperator::solve_shifted(const GridFunction& rhs,
                                            const GridFunction& diag) const {
  require_same_grid(grid_, rhs.grid(), "PoissonOperator::solve_shifted");
  SpMat A = impl_->matrix;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it)
      if (it.row() == it.col()) it.valueRef() += diag[static_cast<std::size_t>(it.row())];
  Eigen::SimplicialLDLT<SpMat> f(A);
  if (f.info() != Eigen::Success)
    throw SolveError("PoissonOperator: shifted factorization failed");
  Eigen::Map<const Eigen::VectorXd> b(rhs.values().data(),
                                      static_cast<Eigen::Index>(rhs.values().size()));
  Eigen::VectorXd x = f.solve(b);
  GridFunction u(grid_);
  for (std::size_t k = 0; k < u.values().size(); ++k) u[k] = x[static_cast<Eigen::Index>(k)];
  return u;
}

std::shared_ptr<const PoissonOperator> poisson_operator(const Grid& g) {
  using Key = std::tuple<int, double, double, double, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const PoissonOperator>> cache;
  const Rect& b = g.bounds();
  Key key{g.n(), b.x_min, b.x_max, b.y_min, b.y_max};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto op = std::make_shared<const PoissonOperator>(g);
  cache.emplace(key, op);
  return op;
}

GridFunction green_apply(const Measure& m) {
  return poisson_operator(m.grid())->solve(discretize_rhs(m));
}

GridFunction green_apply(const Measure& m, const Grid& g) {
  require_same_grid(m.grid(), g, "green_apply");
  return green_apply(m);
}

double green_representation_residual(const GridFunction& u, const Nonlinearity& f,
                                     const Measure& m) {
  require_same_grid(u.grid(), m.grid(), "green_representation_residual");
  const Grid& g = u.grid();
  GridFunction fu(g);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) fu.at(i, j) = f(g.x(i), g.y(j), u.at(i, j));
  if (!fu.all_finite())
    throw std::invalid_argument("green_representation_residual: f(.,u) not finite");
  auto op = poisson_operator(g);
  GridFunction rep = op->solve(fu);
  rep += green_apply(m);
  return l1_distance(u, rep);
}

LogFit fit_log_coefficient(const GridFunction& u, double cx, double cy, double r_min,
                           double r_max) {
  const Grid& g = u.grid();
  double sxx = 0.0, sx = 0.0, sy = 0.0, sxy = 0.0;
  int cnt = 0;
  for (int i = 0; i < g.n(); ++i) {
    for (int j = 0; j < g.n(); ++j) {
      const double r = std::hypot(g.x(i) - cx, g.y(j) - cy);
      if (r < r_min || r > r_max) continue;
      const double t = std::log(1.0 / r);
      sxx += t * t;
      sx += t;
      sy += u.at(i, j);
      sxy += t * u.at(i, j);
      ++cnt;
    }
  }
  if (cnt < 2) throw std::invalid_argument("fit_log_coefficient: annulus holds < 2 nodes");
  const double det = cnt * sxx - sx * sx;
  LogFit fit;
  fit.coefficient = (cnt * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  fit.points = cnt;
  return fit;
}

std::string to_string(Admissibility v) {
  switch (v) {
    case Admissibility::admissible: return "admissible";
    case Admissibility::not_admissible: return "not_admissible";
    default: return "inconclusive";
  }
}

AdmissibilityVerdict admissibility_check(
    const Nonlinearity& f, const std::function<Measure(const Grid&)>& measure_on,
    std::span<const int> ladder, double cauchy_tol, double divergence_threshold) {
  if (ladder.size() < 3)
    throw std::invalid_argument("admissibility_check: ladder must have >= 3 grids");
  AdmissibilityVerdict v;
  v.cauchy_tol = cauchy_tol;
  v.divergence_threshold = divergence_threshold;
  for (int n : ladder) {
    Grid g = Grid::unit_square(n);
    Measure m = measure_on(g);
    GridFunction G = green_apply(m);
    double I = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) I += std::abs(f(g.x(i), g.y(j), G.at(i, j)));
    I *= g.h() * g.h();
    v.ladder.push_back(n);
    v.h.push_back(g.h());
    v.integral.push_back(I);
  }
  for (std::size_t k = 0; k + 1 < v.integral.size(); ++k) {
    const double denom = std::max(std::abs(v.integral[k + 1]), 1e-300);
    v.rel_increment.push_back(std::abs(v.integral[k + 1] - v.integral[k]) / denom);
  }
  // LS slope of log I vs log(1/h); discrete integrals are always finite
  double sxx = 0.0, sx = 0.0, sy = 0.0, sxy = 0.0;
  const int cnt = static_cast<int>(v.integral.size());
  for (int k = 0; k < cnt; ++k) {
    const double X = std::log(1.0 / v.h[static_cast<std::size_t>(k)]);
    const double Y = std::log(std::max(v.integral[static_cast<std::size_t>(k)], 1e-300));
    sxx += X * X;
    sx += X;
    sy += Y;
    sxy += X * Y;
  }
  v.growth_exponent = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  bool cauchy = true;
  for (double r : v.rel_increment) cauchy = cauchy && (r < cauchy_tol);
  if (cauchy && v.growth_exponent <= divergence_threshold)
    v.verdict = Admissibility::admissible;
  else if (v.growth_exponent > divergence_threshold)
    v.verdict = Admissibility::not_admissible;
  else
    v.verdict = Admissibility::inconclusive;
  return v;
}

}  // namespace mplab
