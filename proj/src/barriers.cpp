#include <bbound/barriers.hpp>

#include <bbound/numerics/fd.hpp>
#include <bbound/numerics/ode.hpp>
#include <bbound/numerics/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace bbound {

using numerics::fd_derivative;
using numerics::OdeEvent;
using numerics::OdeOptions;
using numerics::OdeResult;
using numerics::OdeRhs;

namespace {

struct ShotOutcome {
  enum What { reached_b, lost_monotonicity, overshoot } what;
  double phi_end;
  double z_end;
};

// One IVP evaluation of the shooting map.
ShotOutcome shoot(const OdeRhs& rhs, double a, double b, double m, double M,
                  double s0) {
  const double cap = M + 2.0 * std::max(1.0, M - m);
  OdeEvent ev = [&](double, const std::array<double, 4>& y) {
    if (y[1] <= 0.0) return 1.0;
    if (y[0] >= cap) return 1.0;
    return -1.0;
  };
  OdeResult r = numerics::integrate(rhs, 2, a, {m, s0, 0, 0}, {b},
                                    OdeOptions{}, ev);
  ShotOutcome out{};
  if (r.event_hit) {
    out.what = (r.event_y[1] <= 0.0) ? ShotOutcome::lost_monotonicity
                                     : ShotOutcome::overshoot;
    out.phi_end = r.event_y[0];
    out.z_end = r.event_t;
  } else {
    out.what = ShotOutcome::reached_b;
    out.phi_end = r.samples.back().y[0];
    out.z_end = b;
  }
  return out;
}

// Signed shooting defect: negative = undershoot, positive = overshoot.
double shoot_defect(const ShotOutcome& o, double M, double m) {
  switch (o.what) {
    case ShotOutcome::reached_b: return o.phi_end - M;
    case ShotOutcome::lost_monotonicity: return -(M - m) - 1.0;
    case ShotOutcome::overshoot: return (M - m) + 1.0;
  }
  return 0.0;
}

BarrierCurve integrate_curve(const OdeRhs& rhs, BarrierKind kind, double a,
                             double b, double m, double s0, int n_report) {
  OdeEvent ev = [&](double, const std::array<double, 4>& y) {
    return y[1] <= 0.0 ? 1.0 : -1.0;
  };
  auto grid = numerics::linspace(a, b, n_report);
  OdeResult r = numerics::integrate(rhs, 2, a, {m, s0, 0, 0}, grid,
                                    OdeOptions{}, ev);
  if (r.event_hit)
    throw MonotonicityError(
        "barrier: phi' reached zero at z=" + std::to_string(r.event_t),
        r.event_t);
  BarrierCurve curve;
  curve.kind = kind;
  curve.interval = {a, b};
  curve.grid.reserve(r.samples.size());
  for (const auto& s : r.samples) {
    curve.grid.push_back(s.t);
    curve.phi.push_back(s.y[0]);
    curve.dphi.push_back(s.y[1]);
  }
  curve.range = {curve.phi.front(), curve.phi.back()};
  return curve;
}

double bisect_slope(const std::function<double(double)>& defect, double lo,
                    double hi, int iters) {
  double flo = defect(lo);
  double fhi = defect(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw ConstructionError(
        "barrier shooting: bracket [" + std::to_string(lo) + ", " +
        std::to_string(hi) + "] does not enclose an admissible slope");
  for (int it = 0; it < iters; ++it) {
    double mid = 0.5 * (lo + hi);
    double f = defect(mid);
    if (f == 0.0) return mid;
    if (f < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Grow/shrink a slope bracket around an initial target-slope guess.
std::pair<double, double> auto_bracket(
    const std::function<double(double)>& defect, double guess,
    const ShootOptions& opts) {
  double lo = opts.s_lo > 0.0 ? opts.s_lo : guess;
  double hi = opts.s_hi > 0.0 ? opts.s_hi : guess;
  if (opts.s_lo > 0.0 && opts.s_hi > 0.0) return {lo, hi};
  int tries = 0;
  while (defect(lo) > 0.0) {
    lo *= 0.5;
    if (++tries > 60)
      throw ConstructionError("barrier shooting: no undershoot slope found");
  }
  tries = 0;
  while (defect(hi) < 0.0) {
    hi *= 2.0;
    if (++tries > 60)
      throw ConstructionError("barrier shooting: no overshoot slope found");
  }
  return {lo, hi};
}

}  // namespace

double BarrierCurve::min_dphi() const {
  if (is_constant) return 0.0;
  double m = dphi.empty() ? 0.0 : dphi.front();
  for (double d : dphi) m = std::min(m, d);
  return m;
}

BarrierCurve BarrierCurve::constant(double value) {
  BarrierCurve c;
  c.kind = BarrierKind::constant;
  c.is_constant = true;
  c.constant_value = value;
  c.range = {value, value};
  return c;
}

// ---------------------------------------------------------------- flat

BarrierCurve solve_flat_barrier(const IsotropicCoefficients& coeffs, double a,
                                double b, std::array<double, 2> target_range,
                                double delta, const ShootOptions& opts) {
  const double m = target_range[0], M = target_range[1];
  if (!(b > a)) throw ParameterError("flat barrier: need b > a");
  if (M < m) throw ParameterError("flat barrier: empty target range");
  if (delta < 0.0) throw ParameterError("flat barrier: delta must be >= 0");
  if (M == m) return BarrierCurve::constant(m);

  OdeRhs rhs = [&coeffs, delta](double z, const std::array<double, 4>& y,
                                std::array<double, 4>& dy) {
    const double t = y[1];
    const double al = coeffs.alpha(y[0], t);
    const double be = coeffs.beta(y[0], t);
    const double qq = coeffs.q(y[0], t);
    if (!(al > 0.0))
      throw ConstructionError("flat barrier: alpha not positive along curve");
    if (t > 0.0 && !(be > 0.0))
      throw ConstructionError("flat barrier: beta not positive at t > 0");
    dy[0] = y[1];
    dy[1] = (-qq - delta * z * y[1] * be) / al;
    dy[2] = dy[3] = 0.0;
  };

  auto defect = [&](double s0) {
    return shoot_defect(shoot(rhs, a, b, m, M, s0), M, m);
  };
  double guess = (M - m) / (b - a);
  auto [lo, hi] = auto_bracket(defect, guess, opts);
  double s0 = bisect_slope(defect, lo, hi, opts.max_bisections);

  BarrierCurve curve =
      integrate_curve(rhs, BarrierKind::flat, a, b, m, s0, opts.n_report);
  curve.delta = delta;

  // A-posteriori residual of the delta-ODE from FD second derivatives.
  auto ddphi = fd_derivative(curve.grid, curve.dphi);
  double res = 0.0;
  for (std::size_t i = 2; i + 2 < curve.grid.size(); ++i) {
    double z = curve.grid[i], ph = curve.phi[i], dp = curve.dphi[i];
    double r = coeffs.alpha(ph, dp) * ddphi[i] + coeffs.q(ph, dp) +
               delta * z * dp * coeffs.beta(ph, dp);
    res = std::max(res, std::fabs(r));
  }
  curve.residual_norm = res;

  if (delta > 0.0) curve.delta_slope_max = monotonicity_slope_max(curve, coeffs);
  return curve;
}

// ---------------------------------------------------------------- warped

BarrierCurve solve_warped_barrier(const IsotropicCoefficients& coeffs,
                                  const WarpFactor& warp, int n, double a,
                                  double b, std::array<double, 2> target_range,
                                  const ShootOptions& opts) {
  if (!(warp.kappa < 0.0) || warp.constant_one)
    throw ParameterError("warped barrier: requires kappa < 0 warp");
  if (n < 2) throw ParameterError("warped barrier: dimension must be >= 2");
  const double m = target_range[0], M = target_range[1];
  if (M < m) throw ParameterError("warped barrier: empty target range");
  if (M == m) return BarrierCurve::constant(m);
  for (int i = 0; i <= 200; ++i) {
    double z = a + (b - a) * i / 200.0;
    if (!(warp.log_deriv_prime(z) > 0.0))
      throw ParameterError("warped barrier: (rho'/rho)' <= 0 at z=" +
                           std::to_string(z));
  }

  OdeRhs rhs = [&coeffs, &warp, n](double z, const std::array<double, 4>& y,
                                   std::array<double, 4>& dy) {
    const double t = y[1];
    const double al = coeffs.alpha(y[0], t);
    const double be = coeffs.beta(y[0], t);
    const double qq = coeffs.q(y[0], t);
    if (!(al > 0.0))
      throw ConstructionError("warped barrier: alpha not positive along curve");
    if (t > 0.0 && !(be > 0.0))
      throw ConstructionError("warped barrier: beta not positive at t > 0");
    dy[0] = y[1];
    dy[1] = (-qq - double(n - 1) * warp.log_deriv(z) * y[1] * be) / al;
    dy[2] = dy[3] = 0.0;
  };

  auto defect = [&](double s0) {
    return shoot_defect(shoot(rhs, a, b, m, M, s0), M, m);
  };
  double guess = (M - m) / (b - a);
  auto [lo, hi] = auto_bracket(defect, guess, opts);
  double s0 = bisect_slope(defect, lo, hi, opts.max_bisections);

  BarrierCurve curve =
      integrate_curve(rhs, BarrierKind::warped, a, b, m, s0, opts.n_report);

  // Residual of the ratio form of the warped condition.
  auto ddphi = fd_derivative(curve.grid, curve.dphi);
  double res = 0.0;
  for (std::size_t i = 2; i + 2 < curve.grid.size(); ++i) {
    double z = curve.grid[i], ph = curve.phi[i], dp = curve.dphi[i];
    double ratio = (coeffs.q(ph, dp) + ddphi[i] * coeffs.alpha(ph, dp)) /
                   (dp * coeffs.beta(ph, dp));
    res = std::max(res, std::fabs(ratio + double(n - 1) * warp.log_deriv(z)));
  }
  curve.residual_norm = res;
  return curve;
}

// ---------------------------------------------------------------- family

BarrierCurve solve_sphere_family(const VariationalProfile& profile, double c,
                                 int n, int n_report) {
  const double cu = profile.c_sup();
  if (!(c > cu))
    throw ParameterError("sphere family: requires c > c_u = " +
                         std::to_string(cu));
  if (n < 2) throw ParameterError("sphere family: dimension must be >= 2");
  const double m = profile.range()[0], M = profile.range()[1];
  if (M == m) return BarrierCurve::constant(m);
  const double u0 = profile.argmax_Q();
  const double slope0 = std::sqrt(profile.invert_K(c - cu));
  const double z_max = M_PI / 2 - 1e-6;

  // State: (phi, phi', I) with I the accumulated drift integral, so the
  // first-integral identity K((phi')^2) + Q(phi) = c + I can be audited.
  OdeRhs rhs = [&profile, n](double z, const std::array<double, 4>& y,
                             std::array<double, 4>& dy) {
    double s = y[1] * y[1];
    double lam = profile.Lambda(s);
    if (!(lam > 0.0))
      throw EllipticityError("sphere family: Lambda <= 0 along curve");
    double drift = double(n - 1) * std::tan(z) * profile.dPhi(s) * y[1];
    dy[0] = y[1];
    dy[1] = (drift - profile.q(y[0])) / lam;
    dy[2] = drift * y[1];
    dy[3] = 0.0;
  };

  // Find the reach of the curve in each direction (range coverage or
  // boundary proximity), then report on a uniform grid over [a_c, b_c].
  auto find_reach = [&](double direction) {
    double target_u = direction > 0 ? M : m;
    OdeEvent ev = [&](double, const std::array<double, 4>& y) {
      return (direction > 0 ? y[0] >= target_u : y[0] <= target_u) ? 1.0 : -1.0;
    };
    OdeResult r = numerics::integrate(rhs, 3, 0.0, {u0, slope0, 0, 0},
                                      {direction * z_max}, OdeOptions{}, ev);
    if (r.event_hit) return std::pair<double, bool>{r.event_t, true};
    return std::pair<double, bool>{direction * z_max, false};
  };
  auto [b_c, top_ok] = find_reach(+1.0);
  auto [a_c, bottom_ok] = find_reach(-1.0);

  BarrierCurve curve;
  curve.kind = BarrierKind::sphere_family;
  curve.c = c;
  curve.interval = {a_c, b_c};
  curve.coverage_complete = top_ok && bottom_ok;
  if (!curve.coverage_complete)
    curve.note = "coverage: integration reached the (-pi/2, pi/2) boundary "
                 "before covering the profile range";

  auto full = numerics::linspace(a_c, b_c, n_report);
  std::vector<double> neg, pos;
  for (double z : full) (z <= 0.0 ? neg : pos).push_back(z);
  std::reverse(neg.begin(), neg.end());

  std::vector<std::array<double, 3>> rows;  // z, phi, dphi
  double identity_defect = 0.0;
  auto run_side = [&](const std::vector<double>& pts) {
    if (pts.empty()) return;
    OdeResult r =
        numerics::integrate(rhs, 3, 0.0, {u0, slope0, 0, 0}, pts, OdeOptions{});
    for (const auto& smp : r.samples) {
      rows.push_back({smp.t, smp.y[0], smp.y[1]});
      double lhs = profile.K(smp.y[1] * smp.y[1]) + profile.Q(smp.y[0]);
      // Relative defect: phi' grows without bound toward the poles, so the
      // identity is meaningful only against the magnitude of its terms.
      identity_defect =
          std::max(identity_defect,
                   std::fabs(lhs - c - smp.y[2]) / std::max(1.0, std::fabs(lhs)));
    }
  };
  run_side(neg);
  run_side(pos);
  std::sort(rows.begin(), rows.end(),
            [](const auto& l, const auto& r) { return l[0] < r[0]; });
  for (const auto& row : rows) {
    curve.grid.push_back(row[0]);
    curve.phi.push_back(row[1]);
    curve.dphi.push_back(row[2]);
  }
  curve.range = {curve.phi.front(), curve.phi.back()};
  curve.first_integral_defect = identity_defect;

  // The identity forces phi' >= sqrt(Kinv(c - c_u)); record the worst gap
  // as the residual for this kind.
  double worst = 0.0;
  for (double d : curve.dphi) worst = std::min(worst, d - slope0);
  curve.residual_norm = identity_defect;
  curve.note += (curve.note.empty() ? "" : "; ");
  curve.note += "min(phi' - lower bound) = " + std::to_string(worst);
  return curve;
}

// ---------------------------------------------------------------- modica

BarrierCurve modica_barrier(const VariationalProfile& profile, double c,
                            double s0, int n_points) {
  const double cu = profile.c_sup();
  if (!(c > cu))
    throw ParameterError(
        "modica barrier: c <= c_u puts the quadrature singularity inside the "
        "range (c_u = " + std::to_string(cu) + ")");
  const double m = profile.range()[0], M = profile.range()[1];
  if (M == m) return BarrierCurve::constant(m);

  auto speed = [&](double v) {
    return std::sqrt(profile.invert_K(c - profile.Q(v)));
  };
  auto integrand = [&](double v) { return 1.0 / speed(v); };

  // Cumulative quadrature of eq-type s(phi), segment by segment; segments
  // whose endpoint integrand blows past 1e6 switch to a square-root
  // substitution about the steep end.
  std::vector<double> phis(n_points), s(n_points);
  for (int i = 0; i < n_points; ++i)
    phis[i] = m + (M - m) * i / double(n_points - 1);
  phis.back() = M;
  s[0] = s0;
  for (int i = 1; i < n_points; ++i) {
    double a = phis[i - 1], b = phis[i];
    double seg;
    if (integrand(a) > 1e6 || integrand(b) > 1e6) {
      bool steep_right = integrand(b) > integrand(a);
      double E = steep_right ? b : a;
      double w_hi = std::sqrt(std::fabs(b - a));
      seg = numerics::integrate_gk(
          [&](double w) {
            double v = steep_right ? E - w * w : E + w * w;
            return 2.0 * w * integrand(v);
          },
          0.0, w_hi, 1e-13, 1e-13);
    } else {
      seg = numerics::integrate_gk(integrand, a, b, 1e-13, 1e-13);
    }
    s[i] = s[i - 1] + seg;
  }

  BarrierCurve curve;
  curve.kind = BarrierKind::modica;
  curve.c = c;
  curve.grid = s;
  curve.phi = phis;
  curve.dphi.resize(n_points);
  for (int i = 0; i < n_points; ++i) curve.dphi[i] = speed(phis[i]);
  curve.interval = {s.front(), s.back()};
  curve.range = {m, M};

  double fi = 0.0;
  for (int i = 0; i < n_points; ++i) {
    double lhs = profile.K(curve.dphi[i] * curve.dphi[i]) + profile.Q(phis[i]);
    fi = std::max(fi, std::fabs(lhs - c));
  }
  curve.first_integral_defect = fi;
  curve.residual_norm = fi;

  // Cross-validation against the differentiated ODE route.
  auto ode_phi = modica_barrier_ode(profile, c, s0, curve.grid);
  double gap = 0.0;
  for (int i = 0; i < n_points; ++i)
    gap = std::max(gap, std::fabs(ode_phi[i] - curve.phi[i]));
  curve.ode_cross_defect = gap;
  return curve;
}

std::vector<double> modica_barrier_ode(const VariationalProfile& profile,
                                       double c, double s0,
                                       const std::vector<double>& s_grid) {
  const double m = profile.range()[0];
  double slope = std::sqrt(profile.invert_K(c - profile.Q(m)));
  OdeRhs rhs = [&profile](double, const std::array<double, 4>& y,
                          std::array<double, 4>& dy) {
    double lam = profile.Lambda(y[1] * y[1]);
    if (!(lam > 0.0))
      throw EllipticityError("modica ode: Lambda <= 0 along curve");
    dy[0] = y[1];
    dy[1] = -profile.q(y[0]) / lam;
    dy[2] = dy[3] = 0.0;
  };
  OdeResult r =
      numerics::integrate(rhs, 2, s0, {m, slope, 0, 0}, s_grid, OdeOptions{});
  std::vector<double> out;
  out.reserve(r.samples.size());
  for (const auto& smp : r.samples) out.push_back(smp.y[0]);
  return out;
}

// ---------------------------------------------------------------- inverse

InverseBarrier::InverseBarrier(const BarrierCurve& curve) {
  if (curve.is_constant) {
    constant_ = true;
    domain_ = curve.range;
    return;
  }
  if (!(curve.min_dphi() > 0.0))
    throw ConstructionError("invert_barrier: curve is not strictly monotone");
  phi_interp_ =
      numerics::CubicHermite(curve.grid, curve.phi, curve.dphi);
  domain_ = {curve.phi.front(), curve.phi.back()};
}

double InverseBarrier::psi(double v) const {
  if (constant_) throw DomainError("inverse barrier: constant curve has no psi");
  return phi_interp_.invert(v);
}

double InverseBarrier::dpsi(double v) const {
  return 1.0 / phi_interp_.deriv(psi(v));
}

InverseBarrier invert_barrier(const BarrierCurve& curve) {
  return InverseBarrier(curve);
}

// ---------------------------------------------------------------- checks

double monotonicity_slope_max(const BarrierCurve& curve,
                              const IsotropicCoefficients& coeffs) {
  auto ddphi = fd_derivative(curve.grid, curve.dphi);
  std::vector<double> ratio(curve.grid.size());
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    double ph = curve.phi[i], dp = curve.dphi[i];
    ratio[i] = (coeffs.q(ph, dp) + ddphi[i] * coeffs.alpha(ph, dp)) /
               (dp * coeffs.beta(ph, dp));
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 3; i + 3 < curve.grid.size(); ++i) {
    double slope =
        (ratio[i + 1] - ratio[i]) / (curve.grid[i + 1] - curve.grid[i]);
    worst = std::max(worst, slope);
  }
  return worst;
}

}  // namespace bbound
