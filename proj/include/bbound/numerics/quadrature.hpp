#pragma once

#include <functional>

namespace bbound::numerics {

// Adaptive Gauss-Kronrod 15(7) on [a, b]; subdivides until the local error
// estimate meets abs_tol + rel_tol * |I|.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-12, double rel_tol = 1e-12,
                    int max_depth = 40);

}  // namespace bbound::numerics
