#include "mplab/richardson.hpp"

#include <cmath>
#include <stdexcept>

namespace mplab {

RichardsonFit richardson_fit(std::span<const double> h, std::span<const double> a,
                             double beta_min, double beta_max) {
  if (h.size() != a.size() || h.size() < 3)
    throw std::invalid_argument("richardson_fit: need >= 3 samples");
  const std::size_t m = h.size();
  RichardsonFit best;
  bool first = true;
  for (double beta = beta_min; beta <= beta_max + 1e-12; beta += 0.005) {
    // linear LS in (a0, c) for fixed beta
    double s1 = static_cast<double>(m), st = 0.0, stt = 0.0, sy = 0.0, sty = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double t = std::pow(h[k], beta);
      st += t;
      stt += t * t;
      sy += a[k];
      sty += t * a[k];
    }
    const double det = s1 * stt - st * st;
    if (std::abs(det) < 1e-300) continue;
    const double a0 = (sy * stt - st * sty) / det;
    const double c = (s1 * sty - st * sy) / det;
    double r = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double e = a0 + c * std::pow(h[k], beta) - a[k];
      r += e * e;
    }
    if (first || r < best.residual) {
      best = RichardsonFit{a0, c, beta, r};
      first = false;
    }
  }
  return best;
}

}  // namespace mplab
