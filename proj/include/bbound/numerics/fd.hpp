#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace bbound::numerics {

// Derivative of sampled data: 4th-order centered stencils on uniform grids,
// 2nd-order three-point formulas otherwise; one-sided at the ends.
inline std::vector<double> fd_derivative(const std::vector<double>& x,
                                         const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) return d;
  double h = x[1] - x[0];
  bool uniform = true;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::fabs((x[i + 1] - x[i]) - h) > 1e-9 * std::fabs(h)) {
      uniform = false;
      break;
    }
  if (uniform && n >= 5) {
    for (std::size_t i = 2; i + 2 < n; ++i)
      d[i] = (-f[i + 2] + 8 * f[i + 1] - 8 * f[i - 1] + f[i - 2]) / (12 * h);
    d[1] = (f[2] - f[0]) / (2 * h);
    d[n - 2] = (f[n - 1] - f[n - 3]) / (2 * h);
    d[0] = (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
    d[n - 1] = (3 * f[n - 1] - 4 * f[n - 2] + f[n - 3]) / (2 * h);
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
      d[i] = (f[i + 1] * hl * hl - f[i - 1] * hr * hr +
              f[i] * (hr * hr - hl * hl)) /
             (hl * hr * (hl + hr));
    }
    d[0] = (f[1] - f[0]) / (x[1] - x[0]);
    d[n - 1] = (f[n - 1] - f[n - 2]) / (x[n - 1] - x[n - 2]);
  }
  return d;
}

}  // namespace bbound::numerics
