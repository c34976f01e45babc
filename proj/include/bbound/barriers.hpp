#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <bbound/common.hpp>
#include <bbound/geometry.hpp>
#include <bbound/numerics/interp.hpp>
#include <bbound/profiles.hpp>

namespace bbound {

enum class BarrierKind { flat, warped, sphere_family, modica, constant };

// A monotone 1-D comparison function phi on [a, b] with derivative samples.
// Immutable once built; residual fields are a-posteriori finite-difference
// checks of the defining ODE, independent of the integration path.
struct BarrierCurve {
  BarrierKind kind = BarrierKind::flat;
  std::vector<double> grid;  // strictly increasing z-samples
  std::vector<double> phi;
  std::vector<double> dphi;
  std::array<double, 2> interval{0.0, 0.0};
  std::array<double, 2> range{0.0, 0.0};
  double delta = 0.0;
  double c = 0.0;

  double residual_norm = 0.0;          // sup |ODE defect| at interior samples
  double first_integral_defect = 0.0;  // kind-specific invariant defect
  double ode_cross_defect = 0.0;       // modica: quadrature vs ODE sup-gap
  double delta_slope_max = 0.0;        // flat, delta > 0: max FD slope of the
                                       // monotonicity quantity (must be < 0)
  bool coverage_complete = true;       // sphere family: range covered
  std::string note;

  bool is_constant = false;
  double constant_value = 0.0;

  double min_dphi() const;
  static BarrierCurve constant(double value);
};

// Inverse barrier psi with psi(phi(z)) = z. Realised as the exact inverse of
// the cubic Hermite interpolant of phi (slopes from the integrator), so the
// sample identity holds to rounding and dpsi = 1/phi' at samples.
class InverseBarrier {
public:
  InverseBarrier() = default;
  explicit InverseBarrier(const BarrierCurve& curve);

  double psi(double v) const;
  double dpsi(double v) const;
  const std::array<double, 2>& domain() const { return domain_; }
  bool is_constant() const { return constant_; }

private:
  numerics::CubicHermite phi_interp_;
  std::array<double, 2> domain_{0.0, 0.0};
  bool constant_ = false;
};

struct ShootOptions {
  double s_lo = 0.0;  // 0 = derive from target slope
  double s_hi = 0.0;
  int max_bisections = 80;
  int n_report = 1025;
};

// alpha(phi, phi') phi'' + q(phi, phi') = -delta z phi' beta(phi, phi'),
// phi(a) = m and the initial slope shot so that phi(b) = M.
BarrierCurve solve_flat_barrier(const IsotropicCoefficients& coeffs, double a,
                                double b, std::array<double, 2> target_range,
                                double delta, const ShootOptions& opts = {});

// (q + phi'' alpha)/(phi' beta) + (n-1) rho'/rho = 0 with a cosh warp.
BarrierCurve solve_warped_barrier(const IsotropicCoefficients& coeffs,
                                  const WarpFactor& warp, int n, double a,
                                  double b, std::array<double, 2> target_range,
                                  const ShootOptions& opts = {});

// Family member on the round sphere (rho = cos z):
//   Lambda((phi')^2) phi'' + q(phi) = (n-1) tan z Phi'((phi')^2) phi',
//   phi(0) = u0 = argmax Q, phi'(0) = sqrt(Kinv(c - c_u)),
// grown inside (-pi/2, pi/2) until the profile range is covered.
BarrierCurve solve_sphere_family(const VariationalProfile& profile, double c,
                                 int n, int n_report = 1025);

// First-integral barrier K((phi')^2) = c - Q(phi) by quadrature of
//   s = s0 + int dphi / sqrt(Kinv(c - Q(phi)))
// over the profile range, cross-validated against direct ODE integration.
BarrierCurve modica_barrier(const VariationalProfile& profile, double c,
                            double s0, int n_points = 1025);

// The ODE route alone (Lambda((phi')^2) phi'' + q(phi) = 0 from the left
// endpoint), reported on the given s-grid; used for cross-validation.
std::vector<double> modica_barrier_ode(const VariationalProfile& profile,
                                       double c, double s0,
                                       const std::vector<double>& s_grid);

InverseBarrier invert_barrier(const BarrierCurve& curve);

// Scan of the Theorem-3.1 monotonicity quantity (q + phi'' alpha)/(phi' beta)
// on the curve's grid using 4th-order FD second derivatives. Returns the
// maximum finite-difference slope between adjacent interior samples.
double monotonicity_slope_max(const BarrierCurve& curve,
                              const IsotropicCoefficients& coeffs);

}  // namespace bbound
