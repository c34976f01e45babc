#pragma once

#include <array>
#include <functional>
#include <vector>

namespace bbound::numerics {

// Adaptive Dormand-Prince 5(4) for small systems (dim <= 4).
// Report points are hit exactly by clipping the step, so sampled states carry
// integrator accuracy rather than dense-output interpolation error.
//
// Default tolerances sit at 1e-12: finite-difference certification of the
// sampled curves divides per-sample noise by the grid spacing, so 1e-10
// integration would put the a-posteriori residual floor at the 1e-8
// certification threshold itself.
struct OdeOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-4;
  double min_step = 1e-14;
  long max_steps = 2'000'000;
};

struct OdeSample {
  double t;
  std::array<double, 4> y;
  std::array<double, 4> dy;  // f(t, y), for derivative reporting
};

using OdeRhs =
    std::function<void(double, const std::array<double, 4>&, std::array<double, 4>&)>;

// Stop condition evaluated after every accepted step. Returning a value >= 0
// requests a stop; the crossing is then located by step bisection to t_tol.
using OdeEvent = std::function<double(double, const std::array<double, 4>&)>;

struct OdeResult {
  std::vector<OdeSample> samples;
  bool event_hit = false;
  double event_t = 0.0;
  std::array<double, 4> event_y{};
};

// Integrates dim components of y from t0 to t1 (t1 may be < t0), recording a
// sample at every point of `report` (must be monotone from t0 toward t1).
// If `event` is provided, integration stops at the first sign change.
OdeResult integrate(const OdeRhs& f, int dim, double t0,
                    const std::array<double, 4>& y0,
                    const std::vector<double>& report,
                    const OdeOptions& opts = {}, const OdeEvent& event = {});

// Single adaptive solve to t1 without report grid; returns final state.
std::array<double, 4> integrate_to(const OdeRhs& f, int dim, double t0,
                                   const std::array<double, 4>& y0, double t1,
                                   const OdeOptions& opts = {});

std::vector<double> linspace(double a, double b, int n);

}  // namespace bbound::numerics
