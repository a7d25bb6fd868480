#pragma once

// Composite quadrature on non-uniform grids, shared by the profile energy
// integrals and the norm evaluations.

#include "acwave/errors.hpp"

#include <cstddef>
#include <vector>

namespace acwave::quadrature {

// Composite Simpson rule on an arbitrary strictly increasing grid: quadratic
// fits over interval pairs, with the trailing odd interval integrated from the
// quadratic through the last three nodes. Exact for parabolas on any grid.
inline double integrate_grid(const std::vector<double>& x,
                             const std::vector<double>& f) {
  const std::size_t n = x.size();
  if (f.size() != n) throw ValidationError("integrate_grid: length mismatch");
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (x[1] - x[0]) * (f[0] + f[1]);
  double total = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    double h0 = x[i + 1] - x[i], h1 = x[i + 2] - x[i + 1];
    double hs = h0 + h1;
    total += hs / 6.0 *
             ((2.0 - h1 / h0) * f[i] + hs * hs / (h0 * h1) * f[i + 1] +
              (2.0 - h0 / h1) * f[i + 2]);
  }
  if (i + 1 < n) {
    // one interval left: integrate the quadratic through the last three nodes
    // over [x[n-2], x[n-1]]
    double h0 = x[n - 2] - x[n - 3], h1 = x[n - 1] - x[n - 2];
    double hs = h0 + h1;
    total += f[n - 1] * (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * hs) +
             f[n - 2] * (h1 * h1 + 3.0 * h1 * h0) / (6.0 * h0) -
             f[n - 3] * h1 * h1 * h1 / (6.0 * h0 * hs);
  }
  return total;
}

// Trapezoid rule on an arbitrary grid (used where data are only C^0).
inline double trapezoid_grid(const std::vector<double>& x,
                             const std::vector<double>& f) {
  const std::size_t n = x.size();
  if (f.size() != n) throw ValidationError("trapezoid_grid: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    total += 0.5 * (x[i + 1] - x[i]) * (f[i] + f[i + 1]);
  return total;
}

}  // namespace acwave::quadrature
