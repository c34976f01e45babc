#pragma once

#include <functional>

namespace bbound::numerics {

// Brent's method on a sign-changing bracket [a, b].
double brent(const std::function<double(double)>& f, double a, double b,
             double tol = 1e-14, int max_iter = 200);

// Golden-section maximization of f on [a, b] to the given x-tolerance.
double golden_max(const std::function<double(double)>& f, double a, double b,
                  double x_tol = 1e-12);

}  // namespace bbound::numerics
